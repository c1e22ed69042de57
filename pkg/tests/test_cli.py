import json
import subprocess
import sys
from pathlib import Path

import pytest

from conftest import SHIPPED_2ATOM
from mlevidence import example_path
from mlevidence.cli import main, solve_text
from mlevidence.report import ReportRow, ReportTable, emit_report, format_interval

GOLDEN = Path(__file__).parent / "golden"


def run_cli(capsys, *args):
    code = main(list(args))
    out, err = capsys.readouterr()
    return code, out, err


@pytest.mark.parametrize("name", SHIPPED_2ATOM)
def test_golden_tables(capsys, name):
    code, out, _ = run_cli(capsys, "solve", "--json", str(example_path(name)))
    assert code == 0
    doc = json.loads(out)
    assert doc["status"] == "converged"
    got = {q["text"]: (q["lo"], q["hi"]) for q in doc["queries"]}
    expected = json.loads((GOLDEN / f"{name}.json").read_text())
    assert list(got) == list(expected)
    for text, (lo, hi) in expected.items():
        assert got[text][0] == pytest.approx(lo, abs=0.005), text
        assert got[text][1] == pytest.approx(hi, abs=0.005), text


@pytest.mark.parametrize(
    "name, code, status, phrase",
    [
        ("lone_conditional", 3, "polynomiality_violation", "not a polynomial"),
        ("contradiction", 2, "contradiction", "discard the evidence or the axiom"),
        ("infeasible", 2, "infeasible", "lines 4, 5"),
    ],
)
def test_error_exits(capsys, name, code, status, phrase):
    got, out, err = run_cli(capsys, "solve", str(example_path(name)))
    assert got == code
    assert f"status: {status}" in out
    assert phrase in err


def test_parse_error_exit(tmp_path, capsys):
    f = tmp_path / "bad.ev"
    f.write_text("prop A\nobs A : 3 / 2\n")
    code, _, err = run_cli(capsys, "solve", str(f))
    assert code == 1
    assert "line 2, column 9" in err


def test_missing_file(capsys, tmp_path):
    code, _, err = run_cli(capsys, "solve", str(tmp_path / "nope.ev"))
    assert code == 1
    assert "nope.ev" in err


def test_not_converged_exit(capsys):
    code, out, _ = run_cli(capsys, "solve", "--max-iter", "1", str(example_path("poker_1234")))
    assert code == 4
    assert "status: not_converged" in out


def test_text_report(capsys):
    code, out, _ = run_cli(capsys, "solve", str(example_path("poker_12")))
    assert code == 0
    lines = out.splitlines()
    assert "P(A)       0.300" in lines
    assert "P(A & B)   0.000 : 0.125" in lines
    assert "P(A | !B)  0.200 : 0.343" in lines
    assert "null space dimension: 1" in lines


def test_dumps(capsys):
    code, out, _ = run_cli(capsys, "solve", "--json", "--dump-jdv", "--dump-nullspace",
                           str(example_path("poker_123")))
    doc = json.loads(out)
    assert [e["label"] for e in doc["jdv"]] == ["A & B", "A & !B", "!A & B", "!A & !B"]
    assert [e["p"] for e in doc["jdv"]] == pytest.approx([0.174, 0.066, 0.0, 0.76], abs=0.005)
    assert doc["nullspace"] == []
    code, out, _ = run_cli(capsys, "solve", "--dump-jdv", "--dump-nullspace",
                           str(example_path("poker_12")))
    assert "null space basis (truth-table order):" in out
    # the basis vector's sign is arbitrary
    assert ("(0.5000, -0.5000, -0.5000, 0.5000)" in out) != ("(-0.5000, 0.5000, 0.5000, -0.5000)" in out)


def test_json_is_deterministic(capsys):
    outs = set()
    for _ in range(3):
        for name in SHIPPED_2ATOM:
            run_cli(capsys, "solve", "--json", str(example_path(name)))
        _, out, _ = run_cli(capsys, "solve", "--json", str(example_path("poker_1234")))
        outs.add(out)
    assert len(outs) == 1


def test_seeded_runs_agree(capsys):
    tables = []
    for seed in ("1", "2"):
        _, out, _ = run_cli(capsys, "solve", "--json", "--seed", seed, str(example_path("poker_12")))
        tables.append([(q["lo"], q["hi"]) for q in json.loads(out)["queries"]])
    for a, b in zip(*tables):
        assert a == pytest.approx(b, abs=1e-6)


def test_empty_query_list():
    code, table = solve_text("prop A\nobs A : 1 / 4\n")
    assert code == 0
    assert table.rows == []
    doc = json.loads(emit_report(table, "json"))
    assert doc["queries"] == []
    assert "Event" not in emit_report(table, "text")


def test_impossible_condition_row():
    code, table = solve_text(
        "prop A\nprop B\nobs A : 1 / 4\nobs B : 0 / 10\nquery P(A | B)\nquery P(A)\n"
    )
    assert code == 0
    assert table.rows[0].error == "condition impossible"
    assert table.rows[1].lo == pytest.approx(0.25, abs=1e-9)
    assert "undefined (condition impossible)" in emit_report(table, "text")


def test_open_condition_marker():
    code, table = solve_text(
        "prop A\nprop B\nobs A : 9 / 30\nobs B : 5 / 40\nquery P(A | A & B)\n"
    )
    assert code == 0
    assert table.rows[0].open_condition
    assert "(condition can be 0)" in emit_report(table, "text")


def test_format_interval():
    assert format_interval(0.3, 0.3, True) == "0.300"
    assert format_interval(0.0, 0.125, False) == "0.000 : 0.125"


def test_report_rejects_unknown_format():
    with pytest.raises(ValueError, match="format"):
        emit_report(ReportTable("converged", [ReportRow("P(A)", 0.1, 0.1, True)]), "xml")


def test_console_script():
    out = subprocess.run(
        [sys.executable, "-m", "mlevidence", "solve", str(example_path("coin"))],
        capture_output=True, text=True,
    )
    assert out.returncode == 0
    assert "P(heads | joe)   0.333 : 0.667" in out.stdout
