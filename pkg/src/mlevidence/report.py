"""Report tables: text for people, JSON for programs."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field


@dataclass
class ReportRow:
    text: str
    lo: float | None
    hi: float | None
    degenerate: bool = False
    open_condition: bool = False
    error: str | None = None


@dataclass
class ReportTable:
    status: str
    rows: list[ReportRow] = field(default_factory=list)
    log_likelihood: float | None = None
    iterations: int = 0
    stationarity_gap: float | None = None
    nullspace_dim: int | None = None
    message: str = ""
    jdv: list[dict] | None = None
    nullspace: list[list[float]] | None = None


def _finite(x):
    return x if x is not None and math.isfinite(x) else None


def format_interval(lo: float, hi: float, degenerate: bool) -> str:
    if degenerate:
        return f"{(lo + hi) / 2:.3f}"
    return f"{lo:.3f} : {hi:.3f}"


def _text(table: ReportTable) -> str:
    out = [f"status: {table.status}"]
    if table.message:
        out.append(f"message: {table.message}")
    if table.log_likelihood is not None:
        out.append(f"log-likelihood: {table.log_likelihood:.6f}")
        out.append(f"iterations: {table.iterations}")
        out.append(f"stationarity gap: {table.stationarity_gap:.3g}")
    if table.nullspace_dim is not None:
        out.append(f"null space dimension: {table.nullspace_dim}")
    if table.jdv is not None:
        out.append("")
        width = max((len(e["label"]) for e in table.jdv), default=5)
        out.append(f"{'World':<{width}}  P")
        out.extend(f"{e['label']:<{width}}  {e['p']:.6f}" for e in table.jdv)
    if table.nullspace is not None:
        out.append("")
        out.append("null space basis (truth-table order):")
        out.extend(
            "  (" + ", ".join(f"{v:.4f}" for v in vec) + ")" for vec in table.nullspace
        )
    if table.rows:
        out.append("")
        width = max(len("Event"), *(len(r.text) for r in table.rows))
        out.append(f"{'Event':<{width}}  Min : Max")
        for r in table.rows:
            if r.error:
                cell = f"undefined ({r.error})"
            else:
                cell = format_interval(r.lo, r.hi, r.degenerate)
                if r.open_condition:
                    cell += "  (condition can be 0)"
            out.append(f"{r.text:<{width}}  {cell}")
    return "\n".join(out) + "\n"


def _json(table: ReportTable) -> str:
    doc = {
        "status": table.status,
        "log_likelihood": _finite(table.log_likelihood),
        "iterations": table.iterations,
        "stationarity_gap": _finite(table.stationarity_gap),
        "nullspace_dim": table.nullspace_dim,
    }
    if table.message:
        doc["message"] = table.message
    if table.jdv is not None:
        doc["jdv"] = table.jdv
    if table.nullspace is not None:
        doc["nullspace"] = table.nullspace
    queries = []
    for r in table.rows:
        q = {"text": r.text, "lo": r.lo, "hi": r.hi, "degenerate": r.degenerate}
        if r.open_condition:
            q["open_condition"] = True
        if r.error:
            q["error"] = r.error
        queries.append(q)
    doc["queries"] = queries
    return json.dumps(doc, indent=2) + "\n"


def emit_report(table: ReportTable, fmt: str = "text") -> str:
    if fmt == "text":
        return _text(table)
    if fmt == "json":
        return _json(table)
    raise ValueError(f"unknown report format {fmt!r}")
