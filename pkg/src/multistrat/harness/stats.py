"""Small statistics helpers for the Monte Carlo suites."""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass

import numpy as np

log = logging.getLogger(__name__)


class FitError(ValueError):
    pass


def fit_rate(points) -> float:
    """Least-squares slope of ``log(error)`` against ``log(m)``.

    Points with non-positive error are dropped with a warning; at least three
    must remain.
    """
    pts = [(float(m), float(e)) for m, e in points]
    good = [(m, e) for m, e in pts if e > 0 and m > 0 and math.isfinite(e)]
    if len(good) < len(pts):
        log.warning("fit_rate: dropped %d non-positive points", len(pts) - len(good))
    if len(good) < 3:
        raise FitError(f"need at least 3 positive points, have {len(good)}")
    x = np.log([m for m, _ in good])
    y = np.log([e for _, e in good])
    slope, _ = np.polyfit(x, y, 1)
    return float(slope)


@dataclass(frozen=True)
class Moments:
    count: int
    mean: float
    var: float
    se_mean: float
    se_var: float


def sample_moments(x) -> Moments:
    """Mean and unbiased variance with their standard errors.

    The variance SE uses the fourth central moment,
    ``sqrt((mu4 - s^4 (P-3)/(P-1)) / P)``.
    """
    x = np.asarray(x, dtype=float)
    P = x.size
    mean = float(x.mean())
    c = x - mean
    var = float(c @ c / (P - 1))
    mu4 = float(np.mean(c**4))
    se_var = math.sqrt(max(mu4 - var * var * (P - 3) / (P - 1), 0.0) / P)
    return Moments(P, mean, var, math.sqrt(var / P), se_var)


def z_score(estimate: float, target: float, se: float) -> float:
    if se == 0:
        return 0.0 if estimate == target else math.inf
    return (estimate - target) / se
