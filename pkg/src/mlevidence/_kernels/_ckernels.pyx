# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot kernels: simplex pivoting and likelihood evaluation."""

import numpy as np

cimport cython
from libc.math cimport INFINITY, fabs, log

NAME = "cython"


def pivot(double[:, ::1] T, Py_ssize_t row, Py_ssize_t col):
    cdef Py_ssize_t m = T.shape[0], n = T.shape[1], i, c
    cdef double p = T[row, col], f
    for c in range(n):
        T[row, c] /= p
    for i in range(m):
        if i == row:
            continue
        f = T[i, col]
        if f == 0.0:
            continue
        for c in range(n):
            T[i, c] -= f * T[row, c]
    T[row, col] = 1.0


def choose_entering(const double[::1] costs, Py_ssize_t ncols, double tol):
    cdef Py_ssize_t c
    for c in range(ncols):
        if costs[c] < -tol:
            return c
    return -1


def ratio_test(const double[:, ::1] T, Py_ssize_t col, const long[::1] basis, double tol):
    cdef Py_ssize_t m = T.shape[0] - 1, last = T.shape[1] - 1, i
    cdef Py_ssize_t best_row = -1
    cdef double best = INFINITY, r, a
    # first pass: minimum ratio
    for i in range(m):
        a = T[i, col]
        if a > tol:
            r = T[i, last] / a
            if r < best:
                best = r
    if best == INFINITY:
        return -1
    cdef double cut = best + 1e-12 * (fabs(best) if fabs(best) > 1.0 else 1.0)
    for i in range(m):
        a = T[i, col]
        if a > tol and T[i, last] / a <= cut:
            # largest pivot among ties keeps the tableau stable
            if best_row < 0 or a > T[best_row, col] or (
                a == T[best_row, col] and basis[i] < basis[best_row]
            ):
                best_row = i
    return best_row


def loglik_grad(const double[:, ::1] M, const double[::1] k, const double[::1] x):
    cdef Py_ssize_t nt = M.shape[0], L = M.shape[1], i, w
    s_arr = np.zeros(nt)
    grad_arr = np.zeros(L)
    cdef double[::1] s = s_arr
    cdef double[::1] grad = grad_arr
    cdef double acc, value = 0.0, wgt
    for i in range(nt):
        acc = 0.0
        for w in range(L):
            acc += M[i, w] * x[w]
        s[i] = acc
    for i in range(nt):
        if s[i] <= 0.0:
            return -INFINITY, np.zeros(L), s_arr
    for i in range(nt):
        value += k[i] * log(s[i])
        wgt = k[i] / s[i]
        for w in range(L):
            grad[w] += wgt * M[i, w]
    return value, grad_arr, s_arr


cdef inline int _deriv(const double[::1] s, const double[::1] delta, const double[::1] k,
                       double g, double* d1, double* d2) noexcept nogil:
    cdef Py_ssize_t i, n = s.shape[0]
    cdef double v, r
    d1[0] = 0.0
    d2[0] = 0.0
    for i in range(n):
        v = s[i] + g * delta[i]
        if v <= 0.0:
            d1[0] = -INFINITY
            return 0
        r = delta[i] / v
        d1[0] += k[i] * r
        d2[0] -= k[i] * r * r
    return 1


def line_search(const double[::1] s, const double[::1] delta, const double[::1] k,
                double gamma_max, int iters=100):
    cdef double d, dd, lo = 0.0, hi = gamma_max, g, step
    cdef int it, ok, done
    _deriv(s, delta, k, 0.0, &d, &dd)
    if not d > 0.0:
        return 0.0
    _deriv(s, delta, k, gamma_max, &d, &dd)
    if d >= 0.0:
        return gamma_max
    g = 0.5 * gamma_max
    for it in range(iters):
        ok = _deriv(s, delta, k, g, &d, &dd)
        if d > 0.0:
            lo = g
        else:
            hi = g
        if hi - lo <= 1e-16 * (hi if hi > 1.0 else 1.0):
            break
        if ok and dd < 0.0:
            step = g - d / dd
            if lo < step < hi:
                done = fabs(step - g) <= 4e-16 * (g if g > 1.0 else 1.0)
                g = step
                if done:
                    break
                continue
        g = 0.5 * (lo + hi)
    ok = _deriv(s, delta, k, g, &d, &dd)
    return g if ok else lo
