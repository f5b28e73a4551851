"""Multiple Riemann-Stieltjes integrals against piecewise-linear paths.

On each segment of a piecewise-linear path ``dW(s) = slope * ds``, so every
iterated integral reduces to a Lebesgue integral on a grid that contains all
path knots. Two evaluators are provided:

* :func:`ordinary_multiple` folds ``J_k = int f_k J_{k-1} dW`` level by level;
* :func:`ordinary_via_decomposition` rebuilds the top level from the lower
  ones through the integration-by-parts expansion in powers of the path.

Both use the same quadrature. The default ``"corrected"`` rule is the
trapezoid rule plus the Euler-Maclaurin endpoint term; it needs only grid
values because integrand derivatives follow from lower levels and the
analytic ``f'`` and ``f''``. ``"trapezoid"`` drops the correction.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from ._backend import kernels
from .errors import ArgumentError
from .funcs import FunctionSpec, FunctionTuple
from .paths import PiecewiseLinearPath, refine_grid

DEFAULT_REFINE = 2**14
RULES = ("corrected", "trapezoid")


@dataclass(frozen=True, eq=False)
class RefinedGridFunction:
    """Values on a refined grid of a piecewise-linear path.

    ``rate`` optionally holds ``d values / dW`` at the grid times, which lets
    the corrected rule differentiate the integrand of the next level.
    """

    times: np.ndarray
    values: np.ndarray
    rate: Optional[np.ndarray] = None

    def __post_init__(self):
        if np.shape(self.times) != np.shape(self.values):
            raise ArgumentError("times and values differ in length")

    @property
    def terminal(self) -> float:
        return float(self.values[-1])


def default_delta(T: float) -> float:
    return T / DEFAULT_REFINE


def _corrected(rule: str) -> bool:
    if rule not in RULES:
        raise ArgumentError(f"rule must be one of {RULES}, got {rule!r}")
    return rule == "corrected"


def _check_contains_knots(times: np.ndarray, path: PiecewiseLinearPath) -> None:
    if times[0] != 0.0 or times[-1] != path.horizon:
        raise ArgumentError("grid must span [0, T] of the path")
    pos = np.searchsorted(times, path.knots)
    if np.any(pos >= times.size) or np.any(times[np.minimum(pos, times.size - 1)] != path.knots):
        raise ArgumentError("grid does not contain every path knot")


def stieltjes_step(f: FunctionSpec, inner: RefinedGridFunction, path: PiecewiseLinearPath, rule: str = "corrected") -> RefinedGridFunction:
    """``t -> int_0^t f(s) inner(s) dW(s)`` on ``inner.times``.

    Without ``inner.rate`` the endpoint correction cannot be formed and the
    plain trapezoid rule is used.
    """
    corrected = _corrected(rule)
    t = inner.times
    _check_contains_knots(t, path)
    slope = path.slope_on(t)
    dt = np.diff(t)
    g = f.value(t) * inner.values
    incr = 0.5 * dt * slope * (g[:-1] + g[1:])
    if corrected and inner.rate is not None:
        a = f.deriv(t) * inner.values
        b = f.value(t) * inner.rate
        left = slope * (a[:-1] + slope * b[:-1])
        right = slope * (a[1:] + slope * b[1:])
        incr -= dt * dt / 12.0 * (right - left)
    vals = np.empty(t.size)
    vals[0] = 0.0
    np.cumsum(incr, out=vals[1:])
    return RefinedGridFunction(t, vals, g)


def refined_setup(path: PiecewiseLinearPath, delta: Optional[float]):
    """Refined grid, per-interval slopes and path values on the grid."""
    t = refine_grid(path, default_delta(path.horizon) if delta is None else delta)
    return t, path.slope_on(t), np.interp(t, path.knots, path.values)


def ordinary_multiple(tup: FunctionTuple, path: PiecewiseLinearPath, delta: Optional[float] = None, rule: str = "corrected") -> list[RefinedGridFunction]:
    """Levels ``J_0, ..., J_n`` on the refined grid (``J_0`` is identically 1)."""
    corrected = _corrected(rule)
    if abs(tup.horizon - path.horizon) > 1e-12 * max(1.0, path.horizon):
        raise ArgumentError("tuple horizon and path horizon differ")
    t, slope, _ = refined_setup(path, delta)
    F = tup.values(t)
    L = kernels.stieltjes_recursion(F, tup.derivs(t), slope, np.diff(t), corrected)
    out = [RefinedGridFunction(t, L[0], np.zeros_like(t))]
    for k in range(1, tup.n + 1):
        out.append(RefinedGridFunction(t, L[k], F[k - 1] * L[k - 1]))
    return out


def ordinary_via_decomposition(
    tup: FunctionTuple,
    path: PiecewiseLinearPath,
    lower: Sequence[RefinedGridFunction],
    delta: Optional[float] = None,
    rule: str = "corrected",
) -> RefinedGridFunction:
    """Top level ``J_n`` assembled from ``lower = [J_0, ..., J_{n-1}]``.

    ``J_n(t) = sum_k (-1)^(k+1) J_{n-k}(t) W(t)^k/k! g_k(t)
             + sum_k (-1)^k int_0^t J_{n-k} W^k/k! g_k' ds``
    with ``g_k = f_n f_{n-1} ... f_{n+1-k}``.
    """
    corrected = _corrected(rule)
    n = tup.n
    if len(lower) < n:
        raise ArgumentError(f"need levels 0..{n - 1}, got {len(lower)}")
    t, slope, w = refined_setup(path, delta)
    for lev in lower[:n]:
        if lev.times.shape != t.shape or np.any(lev.times != t):
            raise ArgumentError("lower levels live on a different grid")
    J = [lev.values for lev in lower[:n]]
    F = tup.values(t)
    # d J_j / dW
    R = [np.zeros_like(t)] + [F[j - 1] * J[j - 1] for j in range(1, n)]
    dt = np.diff(t)
    out = np.zeros_like(t)
    p_prev = np.ones_like(t)  # W^(k-1)/(k-1)!
    for k in range(1, n + 1):
        p_k = p_prev * w / k
        g, dg, ddg = tup.suffix_arrays(k, t)
        sign = 1.0 if k % 2 else -1.0
        out += sign * J[n - k] * p_k * g
        phi = J[n - k] * p_k * dg
        if corrected:
            a = (R[n - k] * p_k + J[n - k] * p_prev) * dg
            b = J[n - k] * p_k * ddg
            integral = kernels.corrected_trapezoid(phi, slope * a[:-1] + b[:-1], slope * a[1:] + b[1:], dt)
        else:
            integral = kernels.trapezoid_integral(phi, dt)
        out -= sign * integral
        p_prev = p_k
    return RefinedGridFunction(t, out, F[n - 1] * J[n - 1])


def sup_error(a, b) -> float:
    """Max of ``|a - b|`` over the union of both time sets.

    Each operand is linearly interpolated onto the union grid.
    """
    t = np.union1d(a.times, b.times)
    return float(np.max(np.abs(np.interp(t, a.times, a.values) - np.interp(t, b.times, b.values))))


def relative_sup_difference(a, b) -> float:
    """``sup |a - b| / sup |a|`` on a shared grid (0 when both vanish)."""
    diff = float(np.max(np.abs(np.asarray(a.values) - np.asarray(b.values))))
    scale = float(np.max(np.abs(a.values)))
    if scale == 0.0:
        return 0.0 if diff == 0.0 else float("inf")
    return diff / scale
