"""Independent reference values for the integral evaluators.

Nothing in here is used by the production evaluators, and nothing here calls
them: agreement between the two is only evidence if the code paths differ.

* :func:`brute_force_J` integrates over the simplex from the top variable
  down (``int_{s_1 < ... < s_n}`` written as nested integrals over
  ``[s_k, T]``), the reverse of the forward recursion, on its own grid.
* :func:`hermite_ito_closed_form` gives iterated Ito integrals of ones.
* :func:`midpoint_strat` folds midpoint (Stratonovich) Riemann sums.
* :func:`transport_variance` is the exact variance of the transport process.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ArgumentError
from .funcs import FunctionTuple
from .paths import DiscreteBrownianPath, PiecewiseLinearPath
from .strat import GridFunction

MAX_BRUTE_ORDER = 3


@dataclass(frozen=True)
class SimplexQuadSpec:
    n: int
    M: int

    def __post_init__(self):
        if self.n not in (1, 2, 3):
            raise ArgumentError(f"brute-force quadrature supports n in {{1, 2, 3}}, got {self.n}")
        if self.M < 2:
            raise ArgumentError("M must be >= 2")


def brute_force_J(tup: FunctionTuple, path: PiecewiseLinearPath, spec: SimplexQuadSpec) -> float:
    """Terminal value of the ordinary multiple integral by nested trapezoid.

    The grid is the uniform ``M``-mesh of ``[0, T]`` merged with the path
    knots. Error is ``O((T/M)^2)``.
    """
    if tup.n > MAX_BRUTE_ORDER:
        raise ArgumentError(f"order {tup.n} unsupported (cost grows as M^n)")
    if tup.n != spec.n:
        raise ArgumentError(f"spec is for n={spec.n}, tuple has {tup.n} functions")
    T = path.horizon
    grid = np.union1d(np.linspace(0.0, T, spec.M + 1), path.knots)
    grid = grid[np.concatenate(([True], np.diff(grid) > 1e-12))]
    grid[-1] = T
    h = np.diff(grid)
    # slope of the segment containing each grid interval
    seg = np.searchsorted(path.knots, 0.5 * (grid[:-1] + grid[1:])) - 1
    slope = np.diff(path.values)[seg] / np.diff(path.knots)[seg]
    tail = np.ones_like(grid)  # int over [s, T] of the higher variables
    for k in range(tup.n, 0, -1):
        g = tup[k - 1].value(grid) * tail
        piece = 0.5 * h * slope * (g[:-1] + g[1:])
        tail = np.concatenate((np.cumsum(piece[::-1])[::-1], [0.0]))
    return float(tail[0])


def hermite_ito_closed_form(n: int, w: float, t: float) -> float:
    """n-fold iterated Ito integral of ones, ``t^(n/2) He_n(w/sqrt t) / n!``."""
    if n < 0:
        raise ArgumentError("n must be >= 0")
    p_prev, p = 1.0, w
    if n == 0:
        return 1.0
    for k in range(1, n):
        p_prev, p = p, (w * p - t * p_prev) / (k + 1)
    return p


def midpoint_strat(tup: FunctionTuple, path: DiscreteBrownianPath) -> GridFunction:
    """Iterated Stratonovich integral by midpoint-rule Stieltjes sums."""
    t = path.times
    dw = np.diff(path.values)
    y = np.ones_like(t)
    for f in tup.funcs:
        h = f.value(t) * y
        y = np.concatenate(([0.0], np.cumsum(0.5 * (h[:-1] + h[1:]) * dw)))
    return GridFunction(t, y)


def transport_variance(m: float, t: float) -> float:
    """``Var W_m(t) = t - (1 - exp(-2 m t)) / (2 m)``.

    From ``E[(-1)^{N(mu)} (-1)^{N(mv)}] = exp(-2 m |u - v|)`` integrated over
    ``[0, t]^2`` and multiplied by ``m``.
    """
    if not m > 0 or t < 0:
        raise ArgumentError("need m > 0 and t >= 0")
    x = 2.0 * m * t
    # -expm1(-x) avoids cancellation for small m t
    return t - (-math.expm1(-x)) / (2.0 * m)


def gaussian_power_moments(n: int, T: float) -> tuple[float, float]:
    """Mean and variance of ``W(T)^n / n!`` for ``W(T) ~ N(0, T)``."""

    def raw(p: int) -> float:
        if p % 2:
            return 0.0
        return T ** (p // 2) * math.prod(range(p - 1, 0, -2))

    c = math.factorial(n)
    mean = raw(n) / c
    return mean, raw(2 * n) / c**2 - mean**2
