"""Dense two-phase tableau simplex with Bland's anti-cycling rule.

Solves ``min/max c.x`` subject to ``A_ub x <= b_ub``, ``A_eq x = b_eq`` and
``x >= 0``.  Sizes here are small (columns are live worlds), so a dense
tableau is the right tool; the pivot and ratio test run in the kernel
backend.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _kernels
from .errors import InfeasibleError, UnboundedError

PIVOT_TOL = 1e-9
COST_TOL = 1e-12
FEAS_TOL = 1e-9
MAX_PIVOTS = 200_000


@dataclass
class LinearProgram:
    objective: np.ndarray
    A_ub: np.ndarray | None = None
    b_ub: np.ndarray | None = None
    A_eq: np.ndarray | None = None
    b_eq: np.ndarray | None = None

    def __post_init__(self):
        self.objective = np.asarray(self.objective, dtype=float)
        n = self.objective.shape[0]
        self.A_ub, self.b_ub = _rows(self.A_ub, self.b_ub, n)
        self.A_eq, self.b_eq = _rows(self.A_eq, self.b_eq, n)

    @property
    def n_vars(self) -> int:
        return self.objective.shape[0]


def _rows(A, b, n):
    if A is None or len(A) == 0:
        return np.zeros((0, n)), np.zeros(0)
    A = np.atleast_2d(np.asarray(A, dtype=float))
    b = np.asarray(b, dtype=float).reshape(-1)
    if A.shape != (b.shape[0], n):
        raise ValueError(f"constraint shape {A.shape} does not match {b.shape[0]} x {n}")
    return A, b


@dataclass
class LPResult:
    value: float
    x: np.ndarray
    pivots: int


def _run(T, basis, ncols, tol, pivots):
    """Iterate to optimality on the cost row ``T[-1]``.  Returns pivot count."""
    costs = T[-1]
    scale = max(1.0, float(np.abs(costs[:ncols]).max(initial=0.0)))
    while True:
        col = _kernels.choose_entering(costs, ncols, tol)
        if col < 0:
            return pivots
        row = _kernels.ratio_test(T, col, basis, PIVOT_TOL)
        if row < 0:
            if costs[col] < -FEAS_TOL * scale:
                raise UnboundedError("linear program is unbounded")
            T[-1, col] = 0.0  # round-off: a noise cost on a column with no usable pivot
            continue
        _kernels.pivot(T, row, col)
        basis[row] = col
        rhs = T[:-1, -1]
        rhs[(rhs < 0.0) & (rhs > -FEAS_TOL)] = 0.0
        pivots += 1
        if pivots > MAX_PIVOTS:
            raise RuntimeError("simplex pivot limit exceeded")
        costs = T[-1]


def solve_lp(lp: LinearProgram, sense: str = "min") -> LPResult:
    """Optimal value and an optimal basic solution (a vertex).

    Deterministic: Bland's rule with ties broken by lowest index.
    Raises :class:`InfeasibleError` when the constraints have no solution.
    """
    if sense not in ("min", "max"):
        raise ValueError(f"sense must be 'min' or 'max', not {sense!r}")
    c = lp.objective if sense == "min" else -lp.objective
    n = lp.n_vars
    m_ub = lp.A_ub.shape[0]
    m_eq = lp.A_eq.shape[0]
    m = m_ub + m_eq

    A = np.zeros((m, n + m_ub))
    A[:m_ub, :n] = lp.A_ub
    A[:m_ub, n:] = np.eye(m_ub)
    A[m_ub:, :n] = lp.A_eq
    b = np.concatenate([lp.b_ub, lp.b_eq])
    neg = b < 0
    A[neg] *= -1.0
    b = np.abs(b)

    need_art = [i for i in range(m) if i >= m_ub or neg[i]]
    n_struct = n + m_ub
    n_art = len(need_art)
    T = np.zeros((m + 1, n_struct + n_art + 1))
    T[:m, :n_struct] = A
    T[:m, -1] = b
    basis = np.empty(m, dtype=np.int64)
    for i in range(m_ub):
        basis[i] = n + i
    for j, i in enumerate(need_art):
        T[i, n_struct + j] = 1.0
        basis[i] = n_struct + j

    pivots = 0
    if n_art:
        # phase 1: minimize the sum of artificials
        T[-1, :] = 0.0
        T[-1, n_struct : n_struct + n_art] = 1.0
        for i in need_art:
            T[-1] -= T[i]
        pivots = _run(T, basis, n_struct + n_art, FEAS_TOL, pivots)
        if -T[-1, -1] > FEAS_TOL * max(1.0, float(b.max(initial=0.0))):
            raise InfeasibleError("linear constraints are infeasible")
        # drive remaining (zero-level) artificials out of the basis
        keep = np.ones(m, dtype=bool)
        for i in range(m):
            if basis[i] >= n_struct:
                mags = np.abs(T[i, :n_struct])
                col = int(np.argmax(mags)) if n_struct else 0
                if n_struct and mags[col] > PIVOT_TOL:
                    # largest entry: a tiny pivot would blow up the tableau
                    _kernels.pivot(T, i, col)
                    basis[i] = col
                    pivots += 1
                else:
                    keep[i] = False  # redundant row
        rows = np.concatenate([np.nonzero(keep)[0], [m]])
        T = np.ascontiguousarray(
            np.delete(T[rows], np.s_[n_struct : n_struct + n_art], axis=1)
        )
        basis = np.ascontiguousarray(basis[keep])

    # phase 2
    cost = np.zeros(n_struct)
    cost[:n] = c
    T[-1, :] = 0.0
    T[-1, :n_struct] = cost
    for i, bv in enumerate(basis):
        if cost[bv] != 0.0:
            T[-1] -= cost[bv] * T[i]
    tol = COST_TOL * max(1.0, float(np.abs(c).max(initial=0.0)))
    pivots = _run(T, basis, n_struct, tol, pivots)

    x = np.zeros(n_struct)
    x[basis] = T[:-1, -1]
    x = np.maximum(x[:n], 0.0)
    return LPResult(float(lp.objective @ x), x, pivots)
