"""Brownian grid paths and their piecewise-linear approximations.

Two approximation families are provided: the polygonal interpolation of a
sampled Brownian path at ``m`` equispaced times, and the uniform transport
process, whose slope is ``+-sqrt(m)`` and flips sign at the arrival times of a
rate-``m`` Poisson process.

Randomness comes from numpy's PCG64 bit generator keyed by a
``SeedSequence(master_seed, spawn_key=(stream_index,))``. Within a fixed
numpy major version the draws are reproducible bit for bit.
"""
from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import ArgumentError, DomainError

KNOT_TOL = 1e-12
_U64 = 2**64


@dataclass(frozen=True)
class RngSeed:
    master_seed: int
    stream_index: int = 0

    def __post_init__(self):
        for name in ("master_seed", "stream_index"):
            v = getattr(self, name)
            if not (isinstance(v, (int, np.integer)) and 0 <= int(v) < _U64):
                raise ArgumentError(f"{name} must be an unsigned 64-bit integer, got {v!r}")

    def generator(self) -> np.random.Generator:
        ss = np.random.SeedSequence(int(self.master_seed), spawn_key=(int(self.stream_index),))
        return np.random.Generator(np.random.PCG64(ss))


@dataclass(frozen=True, eq=False)
class PiecewiseLinearPath:
    """Continuous path, linear between strictly increasing knots."""

    knots: np.ndarray
    values: np.ndarray
    slopes: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        knots = np.ascontiguousarray(self.knots, dtype=float)
        values = np.ascontiguousarray(self.values, dtype=float)
        if knots.ndim != 1 or knots.shape != values.shape or knots.size < 2:
            raise ArgumentError("knots and values must be 1-d arrays of equal length >= 2")
        if knots[0] != 0.0:
            raise ArgumentError("first knot must be 0")
        if np.any(np.diff(knots) <= 0):
            raise ArgumentError("knots must be strictly increasing")
        if not (np.all(np.isfinite(values)) and np.all(np.isfinite(knots))):
            raise ArgumentError("non-finite path data")
        knots.setflags(write=False)
        values.setflags(write=False)
        slopes = np.diff(values) / np.diff(knots)
        slopes.setflags(write=False)
        object.__setattr__(self, "knots", knots)
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "slopes", slopes)

    @property
    def horizon(self) -> float:
        return float(self.knots[-1])

    @property
    def total_variation(self) -> float:
        return float(np.abs(np.diff(self.values)).sum())

    def __call__(self, t):
        return eval_path(self, t)

    def slope_on(self, times: np.ndarray) -> np.ndarray:
        """Slope on each interval ``[times[i], times[i+1]]``.

        ``times`` must contain every knot so that no interval straddles one.
        """
        mid = 0.5 * (times[:-1] + times[1:])
        idx = np.searchsorted(self.knots, mid, side="right") - 1
        return self.slopes[np.clip(idx, 0, self.slopes.size - 1)]

    def to_csv(self, fileobj) -> None:
        w = csv.writer(fileobj, lineterminator="\n")
        w.writerow(["t", "w"])
        for t, v in zip(self.knots, self.values):
            w.writerow([f"{t:.17g}", f"{v:.17g}"])


@dataclass(frozen=True, eq=False)
class DiscreteBrownianPath:
    """Brownian motion sampled at ``t_j = j T / N``."""

    values: np.ndarray
    horizon: float

    def __post_init__(self):
        values = np.ascontiguousarray(self.values, dtype=float)
        if values.ndim != 1 or values.size < 2:
            raise ArgumentError("need at least two samples")
        if values[0] != 0.0:
            raise ArgumentError("W(0) must be 0")
        values.setflags(write=False)
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "horizon", float(self.horizon))

    @property
    def N(self) -> int:
        return self.values.size - 1

    @property
    def step(self) -> float:
        return self.horizon / self.N

    @property
    def times(self) -> np.ndarray:
        t = np.arange(self.N + 1) * self.step
        t[-1] = self.horizon
        return t

    @property
    def increments(self) -> np.ndarray:
        return np.diff(self.values)

    def coarsen(self, factor: int) -> "DiscreteBrownianPath":
        """The same path observed on every ``factor``-th grid point."""
        if factor < 1 or self.N % factor:
            raise ArgumentError(f"factor {factor} does not divide N={self.N}")
        return DiscreteBrownianPath(self.values[::factor], self.horizon)


def gen_brownian(N: int, T: float, seed: RngSeed) -> DiscreteBrownianPath:
    if N < 1:
        raise ArgumentError("N must be >= 1")
    if not T > 0:
        raise ArgumentError("T must be positive")
    incr = seed.generator().standard_normal(N) * math.sqrt(T / N)
    w = np.empty(N + 1)
    w[0] = 0.0
    np.cumsum(incr, out=w[1:])
    return DiscreteBrownianPath(w, T)


def polygonal(path: DiscreteBrownianPath, m: int) -> PiecewiseLinearPath:
    """Linear interpolation of ``path`` through the points ``j T / m``."""
    if m < 1 or path.N % m:
        raise ArgumentError(f"m={m} does not divide N={path.N}")
    stride = path.N // m
    knots = np.arange(m + 1) * (path.horizon / m)
    knots[-1] = path.horizon
    return PiecewiseLinearPath(knots, path.values[::stride])


def transport_path(m: float, T: float, sign_bit: int, jumps) -> PiecewiseLinearPath:
    """Transport path with given Bernoulli bit and Poisson jump times.

    Slope on the k-th inter-jump segment is ``sqrt(m) * (-1)**(sign_bit + k)``.
    Jumps at or beyond ``T`` are ignored.
    """
    if not m > 0 or not T > 0:
        raise ArgumentError("m and T must be positive")
    jumps = np.sort(np.asarray(jumps, dtype=float))
    jumps = jumps[(jumps > 0) & (jumps < T)]
    knots = np.concatenate(([0.0], jumps, [T]))
    k = np.arange(knots.size - 1)
    signs = np.where((sign_bit + k) % 2 == 0, 1.0, -1.0)
    vals = np.concatenate(([0.0], np.cumsum(math.sqrt(m) * signs * np.diff(knots))))
    # drop knots that would leave a segment shorter than KNOT_TOL; T is kept
    keep = np.concatenate(([True], np.diff(knots) > KNOT_TOL))
    if not keep[-1]:
        keep[-1] = True
        keep[-2] = knots.size == 2
    return PiecewiseLinearPath(knots[keep], vals[keep])


def gen_transport(m: float, T: float, seed: RngSeed) -> PiecewiseLinearPath:
    if not m > 0 or not T > 0:
        raise ArgumentError("m and T must be positive")
    rng = seed.generator()
    sign_bit = int(rng.integers(0, 2))
    lam = m * T
    batch = int(lam + 6.0 * math.sqrt(lam) + 16)
    arrivals = []
    last = 0.0
    while last <= T:
        gaps = rng.exponential(1.0 / m, size=batch)
        cum = last + np.cumsum(gaps)
        arrivals.append(cum)
        last = cum[-1]
    jumps = np.concatenate(arrivals)
    return transport_path(m, T, sign_bit, jumps[jumps < T])


def eval_path(path: PiecewiseLinearPath, t):
    t_arr = np.asarray(t, dtype=float)
    T = path.horizon
    if np.any(t_arr < -KNOT_TOL) or np.any(t_arr > T + KNOT_TOL) or np.any(~np.isfinite(t_arr)):
        raise DomainError(f"t outside [0, {T}]")
    return np.interp(t_arr, path.knots, path.values)[()]


def refine_grid(path: PiecewiseLinearPath, delta: float) -> np.ndarray:
    """Sorted union of the knots with a uniform mesh of step at most ``delta``.

    Mesh points within ``KNOT_TOL`` of a knot are dropped in favour of the knot.
    """
    if not delta > 0:
        raise ArgumentError("delta must be positive")
    T = path.horizon
    cells = max(1, math.ceil(T / delta - 1e-9))
    mesh = np.arange(cells + 1) * (T / cells)
    mesh[-1] = T
    knots = path.knots
    pos = np.searchsorted(knots, mesh)
    lo = np.abs(mesh - knots[np.clip(pos - 1, 0, knots.size - 1)])
    hi = np.abs(knots[np.clip(pos, 0, knots.size - 1)] - mesh)
    near = np.minimum(lo, hi) <= KNOT_TOL
    return np.union1d(knots, mesh[~near])


def load_path_csv(fileobj) -> PiecewiseLinearPath:
    rows = list(csv.reader(line for line in fileobj if not line.startswith("#")))
    if not rows or rows[0] != ["t", "w"]:
        raise ArgumentError("expected header 't,w'")
    data = np.array([[float(a), float(b)] for a, b in rows[1:]])
    return PiecewiseLinearPath(data[:, 0], data[:, 1])


__all__ = [
    "RngSeed",
    "PiecewiseLinearPath",
    "DiscreteBrownianPath",
    "gen_brownian",
    "polygonal",
    "gen_transport",
    "transport_path",
    "eval_path",
    "refine_grid",
    "load_path_csv",
]
