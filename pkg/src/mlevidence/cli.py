"""Command-line driver: ``mlevidence solve FILE``.

Exit codes: 0 converged, 1 parse error, 2 infeasible or contradictory
evidence, 3 polynomiality violation, 4 optimizer did not converge.
"""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from .dsl import build_knowledge_base, parse_evidence
from .errors import (
    ContradictionError,
    EvidenceError,
    FormulaSyntaxError,
    InfeasibleError,
    PolynomialityError,
)
from .formula import truth_table_order, world_label
from .optimizer import CONTRADICTION, CONVERGED, INFEASIBLE, maximize
from .query import (
    ImpossibleConditionError,
    conditional_interval,
    maximizer_polytope,
    null_space_basis,
    prob_interval,
)
from .report import ReportRow, ReportTable, emit_report

EXIT_OK = 0
EXIT_PARSE = 1
EXIT_INFEASIBLE = 2
EXIT_POLYNOMIAL = 3
EXIT_NOT_CONVERGED = 4

def solve_text(
    text: str,
    tolerance: float = 1e-9,
    max_iter: int = 10_000,
    seed: int | None = None,
    dump_jdv: bool = False,
    dump_nullspace: bool = False,
) -> tuple[int, ReportTable]:
    """Parse, compile, solve and answer queries.  Returns (exit code, report)."""
    try:
        ef = parse_evidence(text)
        kb = build_knowledge_base(ef)
    except FormulaSyntaxError as exc:
        return EXIT_PARSE, ReportTable("parse_error", message=str(exc))
    except InfeasibleError as exc:
        return EXIT_INFEASIBLE, ReportTable(INFEASIBLE, message=str(exc))
    except EvidenceError as exc:
        return EXIT_PARSE, ReportTable("parse_error", message=str(exc))

    try:
        model = kb.compile()
    except PolynomialityError as exc:
        return EXIT_POLYNOMIAL, ReportTable("polynomiality_violation", message=str(exc))
    except ContradictionError as exc:
        return EXIT_INFEASIBLE, ReportTable(CONTRADICTION, message=str(exc))
    except InfeasibleError as exc:
        return EXIT_INFEASIBLE, ReportTable(INFEASIBLE, message=str(exc))

    result = maximize(model, tolerance=tolerance, max_iterations=max_iter, seed=seed)
    if result.status in (INFEASIBLE, CONTRADICTION):
        bound_lines = [c.source for c in model.linear_constraints]
        msg = str(EvidenceError(result.message, bound_lines))
        return EXIT_INFEASIBLE, ReportTable(result.status, message=msg)

    basis = null_space_basis(model)
    order = truth_table_order(model.n_atoms)
    table = ReportTable(
        status=result.status,
        log_likelihood=result.value,
        iterations=result.iterations,
        stationarity_gap=result.stationarity_gap,
        nullspace_dim=len(basis),
        message=result.message,
    )
    if dump_jdv:
        table.jdv = [
            {"world": int(w), "label": world_label(int(w), model.registry),
             "p": float(result.jstar[w])}
            for w in order
        ]
    if dump_nullspace:
        table.nullspace = [[float(v) for v in b[order]] for b in basis]
    if result.status != CONVERGED:
        return EXIT_NOT_CONVERGED, table

    mp = maximizer_polytope(model, result)
    for q in ef.queries:
        try:
            if q.condition is None:
                iv = prob_interval(mp, q.event)
            else:
                iv = conditional_interval(mp, q.event, q.condition)
        except ImpossibleConditionError:
            table.rows.append(ReportRow(q.text, None, None, error="condition impossible"))
            continue
        table.rows.append(
            ReportRow(q.text, iv.lo, iv.hi, iv.degenerate, iv.open_condition)
        )
    return EXIT_OK, table


def run(
    path,
    fmt: str = "text",
    tolerance: float = 1e-9,
    max_iter: int = 10_000,
    seed: int | None = None,
    dump_jdv: bool = False,
    dump_nullspace: bool = False,
    out=None,
) -> int:
    out = out or sys.stdout
    text = Path(path).read_text(encoding="utf-8")
    code, table = solve_text(text, tolerance, max_iter, seed, dump_jdv, dump_nullspace)
    if code != EXIT_OK and table.message:
        print(f"{path}: {table.message}", file=sys.stderr)
    out.write(emit_report(table, fmt))
    return code


def _parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mlevidence",
        description="Maximum-likelihood evidence combination with probability intervals.",
    )
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)
    solve = sub.add_parser("solve", help="solve an evidence file and answer its queries")
    solve.add_argument("file", type=Path)
    solve.add_argument("--json", action="store_true", help="structured output")
    solve.add_argument("--tolerance", type=float, default=1e-9)
    solve.add_argument("--max-iter", type=int, default=10_000)
    solve.add_argument("--seed", type=int, default=None,
                       help="randomize the optimizer start with this seed")
    solve.add_argument("--dump-jdv", action="store_true")
    solve.add_argument("--dump-nullspace", action="store_true")
    return parser


def main(argv=None) -> int:
    args = _parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING)
    try:
        return run(
            args.file,
            fmt="json" if args.json else "text",
            tolerance=args.tolerance,
            max_iter=args.max_iter,
            seed=args.seed,
            dump_jdv=args.dump_jdv,
            dump_nullspace=args.dump_nullspace,
        )
    except OSError as exc:
        print(f"mlevidence: {exc}", file=sys.stderr)
        return EXIT_PARSE


if __name__ == "__main__":
    sys.exit(main())
