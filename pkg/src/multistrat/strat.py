"""Iterated Ito integrals and multiple Stratonovich integrals on a Brownian grid.

All stochastic integrals are left-point (Ito) sums; Lebesgue integrals use the
trapezoid rule. The Stratonovich integral is assembled from these in three
independent ways:

``GNSUM``
    weighted sum of the mixed Ito/Lebesgue integrals ``I_alpha`` over all
    multi-indices of order ``n``;
``RECURSION``
    ``I_k = int f_k I_{k-1} dW + 1/2 int f_k f_{k-1} I_{k-2} ds``;
``EXPANSION``
    integration-by-parts expansion in powers of ``W`` with lower-order
    integrals taken from ``RECURSION``.

Midpoint sums are deliberately absent here; see :mod:`multistrat.oracle`.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from ._backend import kernels
from .errors import ArgumentError
from .funcs import FunctionSpec, FunctionTuple
from .multi_index import MultiIndex, enumerate_gn, weight
from .paths import DiscreteBrownianPath


@dataclass(frozen=True, eq=False)
class GridFunction:
    """Process values on a time grid."""

    times: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        if np.shape(self.times) != np.shape(self.values):
            raise ArgumentError("times and values differ in length")

    @property
    def terminal(self) -> float:
        return float(self.values[-1])

    def sup_norm(self) -> float:
        return float(np.max(np.abs(self.values)))

    def at(self, t):
        return np.interp(t, self.times, self.values)


class StratMethod(enum.Enum):
    GNSUM = "gnsum"
    RECURSION = "recursion"
    EXPANSION = "expansion"


def _check_grid(inner: GridFunction, path: DiscreteBrownianPath) -> None:
    if inner.values.shape != (path.N + 1,):
        raise ArgumentError(f"inner has {inner.values.size} points, path grid has {path.N + 1}")


def _times(path_or_times) -> np.ndarray:
    if isinstance(path_or_times, DiscreteBrownianPath):
        return path_or_times.times
    return np.asarray(path_or_times, dtype=float)


def ito_step_integral(f: FunctionSpec, inner: GridFunction, path: DiscreteBrownianPath) -> GridFunction:
    """``t -> int_0^t f(s) inner(s) dW(s)`` as a left-point sum."""
    _check_grid(inner, path)
    t = path.times
    return GridFunction(t, kernels.ito_integral(f.value(t) * inner.values, path.increments))


def lebesgue_step_integral(f: FunctionSpec, g: FunctionSpec, inner: GridFunction, grid) -> GridFunction:
    """``t -> int_0^t f(s) g(s) inner(s) ds`` by the cumulative trapezoid rule."""
    t = _times(grid)
    if inner.values.shape != t.shape:
        raise ArgumentError(f"inner has {inner.values.size} points, grid has {t.size}")
    return GridFunction(t, kernels.trapezoid_integral(f.value(t) * g.value(t) * inner.values, np.diff(t)))


def eval_I_alpha(alpha: MultiIndex, tup: FunctionTuple, path: DiscreteBrownianPath) -> GridFunction:
    """Mixed iterated integral ``I_alpha(f_1, ..., f_n)`` on the path grid.

    Entries of ``alpha`` are applied left to right; a 1 consumes the next
    integrand as a ``dW`` step, a 2 consumes the next two as a ``ds`` step.
    """
    if alpha.order != tup.n:
        raise ArgumentError(f"alpha has order {alpha.order}, tuple has {tup.n} functions")
    t = path.times
    inner = GridFunction(t, np.ones_like(t))
    pos = 0
    for a in alpha:
        if a == 1:
            inner = ito_step_integral(tup[pos], inner, path)
        else:
            inner = lebesgue_step_integral(tup[pos], tup[pos + 1], inner, t)
        pos += a
    return inner


def strat_levels(tup: FunctionTuple, path: DiscreteBrownianPath) -> np.ndarray:
    """``I_0^S, ..., I_n^S`` by the two-term recursion, shape ``(n + 1, N + 1)``."""
    t = path.times
    return kernels.strat_recursion(tup.values(t), path.increments, np.diff(t))


def _gnsum(tup, path):
    total = np.zeros(path.N + 1)
    for alpha in enumerate_gn(tup.n):
        total += weight(alpha) * eval_I_alpha(alpha, tup, path).values
    return total


def expansion_from_levels(tup: FunctionTuple, times: np.ndarray, w: np.ndarray, lower: np.ndarray) -> np.ndarray:
    """Top level from lower levels by the power-of-``W`` expansion.

    ``lower[j]`` holds the order-``j`` integral for ``j = 0..n-1`` on
    ``times``; ``w`` is the driving path on the same grid.
    """
    n = tup.n
    dt = np.diff(times)
    out = np.zeros_like(times)
    wk = np.ones_like(times)
    for k in range(1, n + 1):
        wk = wk * w / k  # W^k / k!
        g, dg, _ = tup.suffix_arrays(k, times)
        sign = 1.0 if k % 2 else -1.0
        out += sign * lower[n - k] * wk * g
        out -= sign * kernels.trapezoid_integral(lower[n - k] * wk * dg, dt)
    return out


def strat_integral(tup: FunctionTuple, path: DiscreteBrownianPath, method: StratMethod = StratMethod.RECURSION) -> GridFunction:
    if tup.n < 1:
        raise ArgumentError("order must be >= 1")
    method = StratMethod(method)
    t = path.times
    if method is StratMethod.GNSUM:
        vals = _gnsum(tup, path)
    elif method is StratMethod.RECURSION:
        vals = strat_levels(tup, path)[tup.n]
    else:
        lower = strat_levels(FunctionTuple(tup.funcs[:-1], tup.horizon), path) if tup.n > 1 else np.ones((1, t.size))
        vals = expansion_from_levels(tup, t, path.values, lower)
    return GridFunction(t, vals)


def closed_form_constant(n: int, w_terminal: float) -> float:
    """``W(T)^n / n!``: the order-``n`` Stratonovich integral of ones."""
    return w_terminal**n / math.factorial(n)
