# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled kernels; see ``_kernels_py`` for the reference semantics."""
import numpy as np

NAME = "cython"


def ito_integral(h, dW):
    cdef const double[::1] hv = np.ascontiguousarray(h, dtype=np.float64)
    cdef const double[::1] dw = np.ascontiguousarray(dW, dtype=np.float64)
    cdef Py_ssize_t m = dw.shape[0], j
    out = np.empty(m + 1)
    cdef double[::1] o = out
    cdef double acc = 0.0
    o[0] = 0.0
    for j in range(m):
        acc += hv[j] * dw[j]
        o[j + 1] = acc
    return out


def trapezoid_integral(h, dt):
    cdef const double[::1] hv = np.ascontiguousarray(h, dtype=np.float64)
    cdef const double[::1] d = np.ascontiguousarray(dt, dtype=np.float64)
    cdef Py_ssize_t m = d.shape[0], j
    out = np.empty(m + 1)
    cdef double[::1] o = out
    cdef double acc = 0.0
    o[0] = 0.0
    for j in range(m):
        acc += 0.5 * d[j] * (hv[j] + hv[j + 1])
        o[j + 1] = acc
    return out


def corrected_trapezoid(h, dh_left, dh_right, dt):
    cdef const double[::1] hv = np.ascontiguousarray(h, dtype=np.float64)
    cdef const double[::1] dl = np.ascontiguousarray(dh_left, dtype=np.float64)
    cdef const double[::1] dr = np.ascontiguousarray(dh_right, dtype=np.float64)
    cdef const double[::1] d = np.ascontiguousarray(dt, dtype=np.float64)
    cdef Py_ssize_t m = d.shape[0], j
    out = np.empty(m + 1)
    cdef double[::1] o = out
    cdef double acc = 0.0
    o[0] = 0.0
    for j in range(m):
        acc += 0.5 * d[j] * (hv[j] + hv[j + 1]) - d[j] * d[j] / 12.0 * (dr[j] - dl[j])
        o[j + 1] = acc
    return out


def strat_recursion(F, dW, dt):
    cdef const double[:, ::1] f = np.ascontiguousarray(F, dtype=np.float64)
    cdef const double[::1] dw = np.ascontiguousarray(dW, dtype=np.float64)
    cdef const double[::1] d = np.ascontiguousarray(dt, dtype=np.float64)
    cdef Py_ssize_t n = f.shape[0], P = f.shape[1], j, k
    out = np.empty((n + 1, P))
    cdef double[:, ::1] L = out
    for j in range(P):
        L[0, j] = 1.0
    for k in range(1, n + 1):
        L[k, 0] = 0.0
    for j in range(P - 1):
        for k in range(1, n + 1):
            L[k, j + 1] = L[k, j] + f[k - 1, j] * L[k - 1, j] * dw[j]
            if k >= 2:
                L[k, j + 1] += 0.25 * d[j] * (
                    f[k - 1, j] * f[k - 2, j] * L[k - 2, j]
                    + f[k - 1, j + 1] * f[k - 2, j + 1] * L[k - 2, j + 1])
    return out


def stieltjes_recursion(F, dF, slope, dt, bint corrected=True):
    cdef const double[:, ::1] f = np.ascontiguousarray(F, dtype=np.float64)
    cdef const double[:, ::1] df = np.ascontiguousarray(dF, dtype=np.float64)
    cdef const double[::1] s = np.ascontiguousarray(slope, dtype=np.float64)
    cdef const double[::1] d = np.ascontiguousarray(dt, dtype=np.float64)
    cdef Py_ssize_t n = f.shape[0], P = f.shape[1], j, k
    cdef double sj, hj, ga, gb, ra, rb, dpa, dpb, incr
    out = np.empty((n + 1, P))
    cdef double[:, ::1] L = out
    for j in range(P):
        L[0, j] = 1.0
    for k in range(1, n + 1):
        L[k, 0] = 0.0
    for j in range(P - 1):
        sj = s[j]
        hj = d[j]
        for k in range(1, n + 1):
            ga = f[k - 1, j] * L[k - 1, j]
            gb = f[k - 1, j + 1] * L[k - 1, j + 1]
            incr = 0.5 * hj * sj * (ga + gb)
            if corrected:
                if k >= 2:
                    ra = f[k - 2, j] * L[k - 2, j]
                    rb = f[k - 2, j + 1] * L[k - 2, j + 1]
                else:
                    ra = 0.0
                    rb = 0.0
                dpa = sj * (df[k - 1, j] * L[k - 1, j]) + sj * sj * f[k - 1, j] * ra
                dpb = sj * (df[k - 1, j + 1] * L[k - 1, j + 1]) + sj * sj * f[k - 1, j + 1] * rb
                incr -= hj * hj / 12.0 * (dpb - dpa)
            L[k, j + 1] = L[k, j] + incr
    return out
