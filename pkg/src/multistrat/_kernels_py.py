"""Numpy reference kernels.

Used when the compiled ``_kernels`` extension is missing or when the
environment variable ``MULTISTRAT_PURE_PYTHON`` is set. Signatures and
semantics match the Cython module exactly; results agree to rounding.

Array conventions: ``P`` grid points, ``P - 1`` intervals. ``F`` and ``dF``
hold integrand values and derivatives with shape ``(n, P)``; returned level
arrays have shape ``(n + 1, P)`` with level 0 identically one.
"""
import numpy as np

NAME = "python"


def _cumulative(incr):
    out = np.empty(incr.size + 1)
    out[0] = 0.0
    np.cumsum(incr, out=out[1:])
    return out


def ito_integral(h, dW):
    """Left-point sums ``out[j] = sum_{i<j} h[i] dW[i]``."""
    h = np.asarray(h, dtype=float)
    return _cumulative(h[:-1] * dW)


def trapezoid_integral(h, dt):
    h = np.asarray(h, dtype=float)
    return _cumulative(0.5 * dt * (h[:-1] + h[1:]))


def corrected_trapezoid(h, dh_left, dh_right, dt):
    """Cumulative trapezoid with the Euler-Maclaurin endpoint correction.

    ``dh_left[i]`` / ``dh_right[i]`` are one-sided derivatives of the
    integrand at the left / right end of interval ``i``. Exact for cubics.
    """
    h = np.asarray(h, dtype=float)
    return _cumulative(0.5 * dt * (h[:-1] + h[1:]) - dt * dt / 12.0 * (dh_right - dh_left))


def strat_recursion(F, dW, dt):
    n, P = F.shape
    L = np.empty((n + 1, P))
    L[0] = 1.0
    for k in range(1, n + 1):
        L[k] = ito_integral(F[k - 1] * L[k - 1], dW)
        if k >= 2:
            L[k] += 0.5 * trapezoid_integral(F[k - 1] * F[k - 2] * L[k - 2], dt)
    return L


def stieltjes_recursion(F, dF, slope, dt, corrected=True):
    n, P = F.shape
    L = np.empty((n + 1, P))
    L[0] = 1.0
    rate = np.zeros(P)  # d L[k-1] / dW along the path
    for k in range(1, n + 1):
        g = F[k - 1] * L[k - 1]
        incr = 0.5 * dt * slope * (g[:-1] + g[1:])
        if corrected:
            # psi = slope * f_k L_{k-1}; d/ds picks up f_k' L_{k-1} and
            # f_k * slope * rate, one-sided at each end of the interval
            a = dF[k - 1] * L[k - 1]
            b = F[k - 1] * rate
            dpsi_l = slope * a[:-1] + slope * slope * b[:-1]
            dpsi_r = slope * a[1:] + slope * slope * b[1:]
            incr -= dt * dt / 12.0 * (dpsi_r - dpsi_l)
        L[k] = _cumulative(incr)
        rate = g
    return L
