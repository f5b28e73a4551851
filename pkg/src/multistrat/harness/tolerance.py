"""Discretization tolerance ``tol(N)`` for agreement between evaluators.

The Stratonovich representations disagree on a grid only through the
discrete quadratic variation, whose fluctuation is ``O(sqrt(T/N))``. The
schedule is ``tol(N) = C * sqrt(T / N)``. ``C`` comes from a one-off
refinement study (:func:`calibrate`) at order 3 with unit integrands and is
stored in ``data/tolerance.json``; tests and suites only read it.
"""
from __future__ import annotations

import json
import math
from functools import lru_cache
from importlib import resources
from pathlib import Path

import numpy as np

from ..funcs import constant_ones
from ..oracle import midpoint_strat
from ..paths import RngSeed, gen_brownian
from ..strat import StratMethod, strat_integral

DATA_FILE = "tolerance.json"


@lru_cache(maxsize=None)
def schedule() -> dict:
    with resources.files("multistrat").joinpath("data", DATA_FILE).open() as fh:
        return json.load(fh)


def tol(N: int, T: float = 1.0) -> float:
    return schedule()["constant"] * math.sqrt(T / N)


def max_discrepancy(tup, path, include_midpoint: bool = True) -> float:
    vals = [strat_integral(tup, path, m).values for m in StratMethod]
    if include_midpoint:
        vals.append(midpoint_strat(tup, path).values)
    worst = 0.0
    for i in range(len(vals)):
        for j in range(i + 1, len(vals)):
            worst = max(worst, float(np.max(np.abs(vals[i] - vals[j]))))
    return worst


def calibrate(num_seeds: int = 200, grids=(2**10, 2**12, 2**14), n: int = 3, safety: float = 2.0, master_seed: int = 20240601) -> dict:
    """Refinement study fixing ``C``.

    For each seed a Brownian path on the finest grid is observed on every
    coarser grid; ``C = safety * max(discrepancy * sqrt(N / T))``.
    """
    T = 1.0
    finest = max(grids)
    tup = constant_ones(n, T)
    scaled = {N: [] for N in grids}
    for s in range(num_seeds):
        w = gen_brownian(finest, T, RngSeed(master_seed, s))
        for N in grids:
            scaled[N].append(max_discrepancy(tup, w.coarsen(finest // N)) * math.sqrt(N / T))
    worst = max(max(v) for v in scaled.values())
    return {
        "form": "constant * sqrt(T / N)",
        "constant": safety * worst,
        "calibration": {
            "order": n,
            "integrands": "ones",
            "T": T,
            "grids": list(grids),
            "num_seeds": num_seeds,
            "master_seed": master_seed,
            "safety": safety,
            "max_scaled_discrepancy": worst,
            "median_scaled_discrepancy": {str(N): float(np.median(v)) for N, v in scaled.items()},
        },
    }


def write_schedule(result: dict, path=None) -> Path:
    target = Path(path) if path else Path(str(resources.files("multistrat").joinpath("data", DATA_FILE)))
    target.write_text(json.dumps(result, indent=2) + "\n")
    schedule.cache_clear()
    return target
