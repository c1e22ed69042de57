"""Maximum-likelihood search over the feasible polytope.

The log-likelihood ``sum_i k_i log(o_i . x)`` is concave, so a point where
no feasible direction improves the linearization is a global maximizer.  The
search is a pairwise Frank-Wolfe method (a feasible-direction scheme): each
step moves weight from the worst active vertex to the best vertex of the
polytope, with an exact line search.  Optimality is certified by one LP per
check: ``max_{y in P} grad . (y - x)``.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .errors import InfeasibleError
from .evidence import CompiledModel
from .lp import LinearProgram, solve_lp

log = logging.getLogger(__name__)

CONVERGED = "converged"
INFEASIBLE = "infeasible"
CONTRADICTION = "contradiction"
NOT_CONVERGED = "not_converged"


@dataclass(frozen=True)
class Row:
    """``lo <= vector . x <= hi`` over live-world coordinates."""

    vector: np.ndarray
    lo: float
    hi: float
    label: str = ""


@dataclass(frozen=True)
class FeasiblePolytope:
    """Probability simplex over ``dim`` live worlds cut by linear rows."""

    dim: int
    rows: tuple[Row, ...] = ()

    @classmethod
    def from_model(cls, model: CompiledModel) -> FeasiblePolytope:
        rows = tuple(
            Row(c.vector[model.live].astype(float), c.lo, c.hi, c.label)
            for c in model.linear_constraints
        )
        return cls(len(model.live), rows)

    def with_rows(self, extra) -> FeasiblePolytope:
        return FeasiblePolytope(self.dim, self.rows + tuple(extra))

    def constraint_arrays(self):
        """``(A_ub, b_ub, A_eq, b_eq)`` for ``x >= 0`` in this polytope.

        Sides that hold for every point of the simplex are skipped.
        """
        A_ub, b_ub = [], []
        A_eq, b_eq = [np.ones(self.dim)], [1.0]
        for r in self.rows:
            vmax = float(r.vector.max(initial=0.0))
            vmin = float(r.vector.min(initial=0.0))
            if r.lo == r.hi:
                A_eq.append(r.vector)
                b_eq.append(r.lo)
                continue
            if r.lo > vmin:
                A_ub.append(-r.vector)
                b_ub.append(-r.lo)
            if r.hi < vmax:
                A_ub.append(r.vector)
                b_ub.append(r.hi)
        return A_ub, b_ub, A_eq, b_eq

    def lp(self, objective) -> LinearProgram:
        A_ub, b_ub, A_eq, b_eq = self.constraint_arrays()
        return LinearProgram(objective, A_ub or None, b_ub or None, A_eq, b_eq)

    @property
    def is_simplex(self) -> bool:
        return not self.rows

    def contains(self, x, tol: float = 1e-9) -> bool:
        x = np.asarray(x, dtype=float)
        if x.shape != (self.dim,) or x.min(initial=0.0) < -tol:
            return False
        if abs(x.sum() - 1.0) > tol:
            return False
        return all(r.lo - tol <= r.vector @ x <= r.hi + tol for r in self.rows)

    def maximize_linear(self, objective) -> np.ndarray:
        """A vertex maximizing ``objective . x`` (lowest index on ties)."""
        objective = np.asarray(objective, dtype=float)
        if self.is_simplex:
            x = np.zeros(self.dim)
            x[int(np.argmax(objective))] = 1.0
            return x
        return solve_lp(self.lp(objective), "max").x


@dataclass
class InteriorPoint:
    x: np.ndarray
    slack: float
    interior: bool


def find_interior_point(p: FeasiblePolytope) -> InteriorPoint:
    """Point maximizing the smallest inequality slack (phase-1 LP).

    Rows with ``lo == hi`` are equalities and excluded from the slack.  When
    the best slack is zero the point is feasible but on the boundary, and
    ``interior`` is False.  Raises :class:`InfeasibleError` on an empty
    polytope.
    """
    if p.is_simplex:
        return InteriorPoint(np.full(p.dim, 1.0 / p.dim), 1.0 / p.dim, True)
    A_ub, b_ub, A_eq, b_eq = p.constraint_arrays()
    n = p.dim
    # variables: x (n), t
    ub = [np.append(-np.eye(n)[w], 1.0) for w in range(n)]
    ubb = [0.0] * n
    for a, b in zip(A_ub, b_ub):
        ub.append(np.append(a, 1.0))
        ubb.append(b)
    eq = [np.append(a, 0.0) for a in A_eq]
    obj = np.zeros(n + 1)
    obj[-1] = 1.0
    res = solve_lp(LinearProgram(obj, ub, ubb, eq, b_eq), "max")
    x = res.x[:n]
    t = float(res.x[-1])
    return InteriorPoint(x / x.sum(), t, t > 1e-12)


@dataclass
class SolveResult:
    status: str
    jstar: np.ndarray | None = None
    value: float = -math.inf
    iterations: int = 0
    stationarity_gap: float = math.inf
    message: str = ""

    @property
    def converged(self) -> bool:
        return self.status == CONVERGED


def stationarity_gap(p: FeasiblePolytope, grad, x) -> float:
    """``max_{y in P} grad . (y - x)``, computed with the LP solver."""
    grad = np.asarray(grad, dtype=float)
    y = solve_lp(p.lp(grad), "max").x
    return float(grad @ y - grad @ x)


def _start_point(model, p, M, rng):
    try:
        ip = find_interior_point(p)
    except InfeasibleError:
        return None, INFEASIBLE
    x0 = ip.x
    if M.shape[0] and (M @ x0).min() <= 0.0:
        # some observed term has zero probability at the phase-1 point: pull
        # toward the point maximizing the smallest term probability
        n = p.dim
        A_ub, b_ub, A_eq, b_eq = p.constraint_arrays()
        ub = [np.append(a, 0.0) for a in A_ub] + [np.append(-row, 1.0) for row in M]
        ubb = list(b_ub) + [0.0] * M.shape[0]
        eq = [np.append(a, 0.0) for a in A_eq]
        obj = np.zeros(n + 1)
        obj[-1] = 1.0
        res = solve_lp(LinearProgram(obj, ub, ubb, eq, b_eq), "max")
        if res.x[-1] <= 1e-12:
            return None, CONTRADICTION
        x0 = 0.5 * (x0 + res.x[:n])
    if rng is not None:
        if p.is_simplex:
            x0 = 0.5 * (x0 + rng.dirichlet(np.ones(p.dim)))
        else:
            v = p.maximize_linear(rng.standard_normal(p.dim))
            lam = rng.uniform(0.2, 0.8)
            x0 = (1.0 - lam) * x0 + lam * v
    return x0, None


def maximize(
    model: CompiledModel,
    tolerance: float = 1e-9,
    max_iterations: int = 10_000,
    seed: int | None = None,
) -> SolveResult:
    """Maximize the log-likelihood of ``model`` over its feasible polytope.

    Converged results satisfy ``gap <= tolerance * (1 + |value|)`` where
    ``gap`` is the LP stationarity gap at ``jstar``.  ``seed`` randomizes the
    starting point; the default start is deterministic.
    """
    p = FeasiblePolytope.from_model(model)
    M = model.term_matrix
    k = model.exponents
    rng = np.random.default_rng(seed) if seed is not None else None

    x, bad = _start_point(model, p, M, rng)
    if bad == INFEASIBLE:
        return SolveResult(INFEASIBLE, message="the feasible set of joint distributions is empty")
    if bad == CONTRADICTION:
        return SolveResult(
            CONTRADICTION,
            message="the constraints force an observed event to probability 0; "
            "discard the evidence or the constraint",
        )

    if M.shape[0] == 0:
        x = np.maximum(x, 0.0)
        return SolveResult(CONVERGED, model.expand(x / x.sum()), 0.0, 0, 0.0)

    # active set: vertex key -> weight; on the plain simplex keys are world indices
    simplex = p.is_simplex
    if simplex:
        weights = {int(w): float(x[w]) for w in np.nonzero(x > 0)[0]}
        vectors = {}
    else:
        weights = {"start": 1.0}
        vectors = {"start": x.copy()}

    def vec(key):
        if simplex:
            e = np.zeros(p.dim)
            e[key] = 1.0
            return e
        return vectors[key]

    value = -math.inf
    gap = math.inf
    it = 0
    for it in range(1, max_iterations + 1):
        value, g, s = _kernels.loglik_grad(M, k, x)
        if simplex:
            top = int(np.argmax(g))
            fw_key, fw_val = top, float(g[top])
        else:
            v = p.maximize_linear(g)
            fw_key, fw_val = np.round(v, 12).tobytes(), float(g @ v)
            vectors.setdefault(fw_key, v)
        gx = float(g @ x)
        gap = fw_val - gx
        threshold = tolerance * (1.0 + abs(value))
        if gap <= 0.25 * threshold:  # margin for the LP certificate below
            break
        # away vertex: active atom with the smallest directional value
        if simplex:
            keys = np.fromiter(weights.keys(), dtype=np.int64)
            away = int(keys[np.argmin(g[keys])])
        else:
            away = min(weights, key=lambda key: float(g @ vectors[key]))
        d = vec(fw_key) - vec(away)
        gmax = weights[away]
        delta = np.ascontiguousarray(M @ d)
        gamma = float(_kernels.line_search(np.ascontiguousarray(s), delta, k, gmax))
        if gamma <= 0.0:
            # rounding stalled the line search; take a tiny guarded step instead
            gamma = min(gmax, 1e-16)
        x = x + gamma * d
        np.maximum(x, 0.0, out=x)
        weights[fw_key] = weights.get(fw_key, 0.0) + gamma
        if gamma >= gmax * (1.0 - 1e-15):
            del weights[away]
            if not simplex and away != fw_key:
                vectors.pop(away, None)
        else:
            weights[away] -= gamma
        if it % 256 == 0:
            x = sum(w * vec(key) for key, w in weights.items())
            x = x / x.sum()
    else:
        it = max_iterations

    x = x / x.sum()
    value, g, _ = _kernels.loglik_grad(M, k, x)
    cert = stationarity_gap(p, g, x)
    threshold = tolerance * (1.0 + abs(value))
    status = CONVERGED if cert <= threshold else NOT_CONVERGED
    msg = "" if status == CONVERGED else (
        f"stationarity gap {cert:.3g} above {threshold:.3g} after {it} iterations"
    )
    log.debug("maximize: %s value=%.12g gap=%.3g iterations=%d", status, value, cert, it)
    return SolveResult(status, model.expand(x), float(value), it, cert, msg)
