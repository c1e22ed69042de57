"""Pure numpy implementations of the hot kernels.

Every function here has a twin in ``_ckernels.pyx`` with the same signature
and semantics; the package picks one at import time.
"""

import math

import numpy as np

NAME = "python"


def pivot(T, row, col):
    """Pivot the dense tableau ``T`` in place on entry ``(row, col)``."""
    T[row] /= T[row, col]
    prow = T[row]
    factors = T[:, col].copy()
    factors[row] = 0.0
    nz = np.nonzero(factors)[0]
    if nz.size:
        T[nz] -= np.outer(factors[nz], prow)
    T[row, col] = 1.0


def choose_entering(costs, ncols, tol):
    """Bland's rule: lowest column index with reduced cost below ``-tol``."""
    idx = np.nonzero(costs[:ncols] < -tol)[0]
    return int(idx[0]) if idx.size else -1


def ratio_test(T, col, basis, tol):
    """Minimum-ratio leaving row.

    Among tied rows the largest pivot element wins (tiny pivots blow up the
    tableau on near-degenerate slabs); remaining ties go to the lowest basic
    variable index.
    """
    column = T[:-1, col]
    rhs = T[:-1, -1]
    rows = np.nonzero(column > tol)[0]
    if rows.size == 0:
        return -1
    ratios = rhs[rows] / column[rows]
    best = ratios.min()
    tied = rows[ratios <= best + 1e-12 * max(1.0, abs(best))]
    piv = column[tied]
    tied = tied[piv == piv.max()]
    return int(tied[np.argmin(basis[tied])])


def loglik_grad(M, k, x):
    """Return ``(value, grad, s)`` with ``s = M @ x``.

    ``value`` is ``-inf`` and ``grad`` all zeros when some ``s_i <= 0``.
    """
    s = M @ x
    if s.size and s.min() <= 0.0:
        return -math.inf, np.zeros(M.shape[1]), s
    value = float(k @ np.log(s)) if s.size else 0.0
    grad = (k / s) @ M if s.size else np.zeros(M.shape[1])
    return value, grad, s


def line_search(s, delta, k, gamma_max, iters=100):
    """Maximize ``sum k_i log(s_i + g delta_i)`` over ``g`` in ``[0, gamma_max]``.

    The objective is concave in ``g``; the root of its derivative is found by
    Newton steps safeguarded with bisection.  Points where some
    ``s_i + g delta_i <= 0`` count as having derivative ``-inf``.
    """

    def deriv(g):
        v = s + g * delta
        if np.any(v <= 0.0):
            return -math.inf, 0.0
        r = delta / v
        return float(k @ r), float(-(k @ (r * r)))

    d0, _ = deriv(0.0)
    if not d0 > 0.0:
        return 0.0
    dmax, _ = deriv(gamma_max)
    if dmax >= 0.0:
        return gamma_max
    lo, hi = 0.0, gamma_max
    g = 0.5 * gamma_max
    for _ in range(iters):
        d, dd = deriv(g)
        if d > 0.0:
            lo = g
        else:
            hi = g
        if hi - lo <= 1e-16 * max(1.0, hi):
            break
        if d != -math.inf and dd < 0.0:
            step = g - d / dd
            if lo < step < hi:
                done = abs(step - g) <= 4e-16 * max(1.0, g)
                g = step
                if done:
                    break
                continue
        g = 0.5 * (lo + hi)
    return lo if deriv(g)[0] == -math.inf else g
