"""Probability intervals over the set of all maximum-likelihood JDVs.

Two maximizers differ only by a vector orthogonal to every term vector, so
the maximizer set is the feasible polytope cut by ``o_i . j = o_i . jstar``
for each term.  Query bounds are linear programs over that set; conditional
bounds are linear-fractional and go through the Charnes-Cooper change of
variables ``y = j / (d . j)``, ``t = 1 / (d . j)``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import EvidenceError
from .evidence import CompiledModel
from .formula import And, Formula
from .lp import LinearProgram, solve_lp
from .optimizer import FeasiblePolytope, Row, SolveResult

BAND = 0.0
DEGENERATE_WIDTH = 1e-6
IMPOSSIBLE = 1e-6  # below this P(e | c) is mostly round-off


class ImpossibleConditionError(EvidenceError):
    """The condition of a conditional query has probability 0 at every maximizer."""


@dataclass(frozen=True)
class ProbabilityInterval:
    lo: float
    hi: float
    # the denominator of a conditional query reaches 0 inside the maximizer
    # set; the bounds are then the sup/inf over the part where it is positive
    open_condition: bool = False

    @property
    def degenerate(self) -> bool:
        return self.hi - self.lo <= DEGENERATE_WIDTH

    @property
    def width(self) -> float:
        return self.hi - self.lo

    def __contains__(self, p: float) -> bool:
        return self.lo <= p <= self.hi


@dataclass(frozen=True)
class MaximizerPolytope:
    model: CompiledModel
    jstar: np.ndarray  # full length
    polytope: FeasiblePolytope  # live-world coordinates
    band: float

    def contains(self, jdv, tol: float = 1e-9) -> bool:
        x = self.model.restrict(jdv)
        return self.polytope.contains(x, tol) and float(np.asarray(jdv)[
            list(self.model.zeroed_worlds)
        ].sum()) <= tol


def maximizer_polytope(
    model: CompiledModel, result: SolveResult, band: float = BAND
) -> MaximizerPolytope:
    """Feasible set cut by the term probabilities of the maximizer ``result``."""
    if not result.converged:
        raise ValueError(f"maximizer polytope needs a converged result, got {result.status}")
    base = FeasiblePolytope.from_model(model)
    x = model.restrict(result.jstar)
    rows = []
    for t, o in zip(model.terms, model.term_matrix):
        v = float(o @ x)
        rows.append(Row(o, max(0.0, v - band), min(1.0, v + band), ",".join(t.labels)))
    return MaximizerPolytope(model, np.asarray(result.jstar, float), base.with_rows(rows), band)


def null_space_basis(model: CompiledModel, rtol: float | None = None) -> list[np.ndarray]:
    """Orthonormal basis of the live-world directions orthogonal to every term.

    Vectors are returned over all worlds (zero on zeroed worlds).
    """
    M = model.term_matrix
    L = M.shape[1]
    if M.shape[0] == 0:
        basis = np.eye(L)
    else:
        _, sv, vh = np.linalg.svd(M, full_matrices=True)
        if rtol is None:
            rtol = max(M.shape) * np.finfo(float).eps
        rank = int((sv > rtol * sv.max(initial=0.0)).sum())
        basis = vh[rank:]
    return [model.expand(b) for b in basis]


def _query_vector(mp: MaximizerPolytope, f) -> np.ndarray:
    if isinstance(f, Formula):
        f = mp.model.vector(f)
    return np.asarray(f, dtype=float)[mp.model.live]


def prob_interval(mp: MaximizerPolytope, f) -> ProbabilityInterval:
    """Min and max of ``P(f)`` over the maximizer set.  ``f`` may be an OV."""
    q = _query_vector(mp, f)
    lp = mp.polytope.lp(q)
    lo = solve_lp(lp, "min").value
    hi = solve_lp(lp, "max").value
    lo, hi = min(max(lo, 0.0), 1.0), min(max(hi, 0.0), 1.0)
    return ProbabilityInterval(lo, max(lo, hi))


def _charnes_cooper(p: FeasiblePolytope, num, den) -> LinearProgram:
    # variables (y, t): y = t * j, t = 1 / (den . j)
    n = p.dim
    A_ub, b_ub, A_eq, b_eq = [], [], [], []

    def homog(vec, rhs):
        return np.append(vec, -rhs)

    A_eq.append(homog(np.ones(n), 1.0))
    b_eq.append(0.0)
    for r in p.rows:
        vmax = float(r.vector.max(initial=0.0))
        vmin = float(r.vector.min(initial=0.0))
        if r.lo == r.hi:
            A_eq.append(homog(r.vector, r.lo))
            b_eq.append(0.0)
            continue
        if r.lo > vmin:
            A_ub.append(-homog(r.vector, r.lo))
            b_ub.append(0.0)
        if r.hi < vmax:
            A_ub.append(homog(r.vector, r.hi))
            b_ub.append(0.0)
    A_eq.append(np.append(den, 0.0))
    b_eq.append(1.0)
    return LinearProgram(np.append(num, 0.0), A_ub or None, b_ub or None, A_eq, b_eq)


def conditional_interval(
    mp: MaximizerPolytope, event: Formula, cond: Formula
) -> ProbabilityInterval:
    """Bounds of ``P(event | cond)`` over maximizers where ``P(cond) > 0``."""
    den = _query_vector(mp, cond)
    num = _query_vector(mp, mp.model.vector(And(cond, event)))
    den_lp = mp.polytope.lp(den)
    den_hi = solve_lp(den_lp, "max").value
    if den_hi <= IMPOSSIBLE:
        raise ImpossibleConditionError(
            f"condition {cond} has probability 0 in every maximum-likelihood distribution"
        )
    den_lo = solve_lp(den_lp, "min").value
    lp = _charnes_cooper(mp.polytope, num, den)
    lo = solve_lp(lp, "min").value
    hi = solve_lp(lp, "max").value
    lo, hi = min(max(lo, 0.0), 1.0), min(max(hi, 0.0), 1.0)
    return ProbabilityInterval(lo, max(lo, hi), open_condition=den_lo <= IMPOSSIBLE)
