"""Integrand family with analytic derivatives.

Each coordinate integrand is one of three closed-form variants (polynomial,
sine, exponential). Values and the first two derivatives are exact, so the
integral evaluators never differentiate numerically.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence, Union

import numpy as np
from numpy.polynomial import polynomial as P

from .errors import ArgumentError, ConfigError, DomainError

ArrayLike = Union[float, np.ndarray]

# slack for t == T computed in floating point
_DOMAIN_EPS = 1e-12


@dataclass(frozen=True)
class Poly:
    """Polynomial ``c0 + c1 t + ... + cd t^d``."""

    coeffs: tuple

    def __post_init__(self):
        coeffs = tuple(float(c) for c in self.coeffs)
        if not coeffs:
            raise ArgumentError("Poly needs at least one coefficient")
        if not all(math.isfinite(c) for c in coeffs):
            raise ArgumentError("Poly coefficients must be finite")
        object.__setattr__(self, "coeffs", coeffs)

    def value(self, t: ArrayLike) -> ArrayLike:
        return P.polyval(t, self.coeffs)

    def deriv(self, t: ArrayLike) -> ArrayLike:
        if len(self.coeffs) == 1:
            return np.zeros_like(np.asarray(t, dtype=float))[()]
        return P.polyval(t, P.polyder(self.coeffs))

    def deriv2(self, t: ArrayLike) -> ArrayLike:
        if len(self.coeffs) <= 2:
            return np.zeros_like(np.asarray(t, dtype=float))[()]
        return P.polyval(t, P.polyder(self.coeffs, 2))

    def to_dict(self) -> dict:
        return {"type": "poly", "coeffs": list(self.coeffs)}


@dataclass(frozen=True)
class Sin:
    """``sin(a t + b)``."""

    a: float
    b: float = 0.0

    def value(self, t: ArrayLike) -> ArrayLike:
        return np.sin(self.a * np.asarray(t, dtype=float) + self.b)[()]

    def deriv(self, t: ArrayLike) -> ArrayLike:
        return (self.a * np.cos(self.a * np.asarray(t, dtype=float) + self.b))[()]

    def deriv2(self, t: ArrayLike) -> ArrayLike:
        return (-self.a * self.a * np.sin(self.a * np.asarray(t, dtype=float) + self.b))[()]

    def to_dict(self) -> dict:
        return {"type": "sin", "a": self.a, "b": self.b}


@dataclass(frozen=True)
class Exp:
    """``exp(a t)``."""

    a: float

    def value(self, t: ArrayLike) -> ArrayLike:
        return np.exp(self.a * np.asarray(t, dtype=float))[()]

    def deriv(self, t: ArrayLike) -> ArrayLike:
        return (self.a * np.exp(self.a * np.asarray(t, dtype=float)))[()]

    def deriv2(self, t: ArrayLike) -> ArrayLike:
        return (self.a * self.a * np.exp(self.a * np.asarray(t, dtype=float)))[()]

    def to_dict(self) -> dict:
        return {"type": "exp", "a": self.a}


FunctionSpec = Union[Poly, Sin, Exp]

ONE = Poly((1.0,))


def _check_domain(t: ArrayLike, horizon: float) -> None:
    arr = np.asarray(t, dtype=float)
    if np.any(~np.isfinite(arr)) or np.any(arr < -_DOMAIN_EPS) or np.any(arr > horizon + _DOMAIN_EPS):
        raise DomainError(f"t outside [0, {horizon}]")


def evaluate(f: FunctionSpec, t: ArrayLike, horizon: float) -> ArrayLike:
    """Value of ``f`` at ``t`` in ``[0, horizon]``."""
    _check_domain(t, horizon)
    return f.value(t)


def deriv_evaluate(f: FunctionSpec, t: ArrayLike, horizon: float) -> ArrayLike:
    """Analytic derivative of ``f`` at ``t`` in ``[0, horizon]``."""
    _check_domain(t, horizon)
    return f.deriv(t)


@dataclass(frozen=True)
class FunctionTuple:
    """Ordered integrands ``(f_1, ..., f_n)`` on ``[0, horizon]``."""

    funcs: tuple
    horizon: float = 1.0

    def __post_init__(self):
        funcs = tuple(self.funcs)
        if not funcs:
            raise ArgumentError("FunctionTuple needs at least one function")
        if not (self.horizon > 0 and math.isfinite(self.horizon)):
            raise ArgumentError("horizon must be positive and finite")
        object.__setattr__(self, "funcs", funcs)
        object.__setattr__(self, "horizon", float(self.horizon))

    @property
    def n(self) -> int:
        return len(self.funcs)

    def __len__(self) -> int:
        return len(self.funcs)

    def __getitem__(self, i):
        return self.funcs[i]

    def values(self, t: np.ndarray) -> np.ndarray:
        """Array of shape (n, len(t)) with ``f_i(t)`` in row ``i - 1``."""
        t = np.asarray(t, dtype=float)
        return np.vstack([np.broadcast_to(f.value(t), t.shape) for f in self.funcs])

    def derivs(self, t: np.ndarray) -> np.ndarray:
        t = np.asarray(t, dtype=float)
        return np.vstack([np.broadcast_to(f.deriv(t), t.shape) for f in self.funcs])

    def suffix_arrays(self, k: int, t: np.ndarray):
        """Value, first and second derivative of ``f_n f_{n-1} ... f_{n+1-k}``.

        Evaluated elementwise on ``t`` by repeated product rule.
        """
        if not 1 <= k <= self.n:
            raise ArgumentError(f"k={k} outside 1..{self.n}")
        t = np.asarray(t, dtype=float)
        v = np.ones_like(t)
        d1 = np.zeros_like(t)
        d2 = np.zeros_like(t)
        for f in self.funcs[self.n - k:][::-1]:
            fv, fd, fdd = f.value(t), f.deriv(t), f.deriv2(t)
            v, d1, d2 = v * fv, d1 * fv + v * fd, d2 * fv + 2.0 * d1 * fd + v * fdd
        return v, d1, d2

    def to_list(self) -> list:
        return [f.to_dict() for f in self.funcs]


def suffix_product(tup: FunctionTuple, k: int, t: float) -> tuple[float, float]:
    """``(prod_{l=1..k} f_{n+1-l})(t)`` and its derivative."""
    _check_domain(t, tup.horizon)
    v, d1, _ = tup.suffix_arrays(k, np.asarray(t, dtype=float))
    return float(v), float(d1)


def from_dict(obj: dict) -> FunctionSpec:
    """Decode the JSON form used by experiment configs."""
    if not isinstance(obj, dict) or "type" not in obj:
        raise ConfigError("functions", f"expected an object with a 'type' key, got {obj!r}")
    kind = obj["type"]
    try:
        if kind == "poly":
            return Poly(tuple(obj["coeffs"]))
        if kind == "sin":
            return Sin(float(obj["a"]), float(obj.get("b", 0.0)))
        if kind == "exp":
            return Exp(float(obj["a"]))
    except (KeyError, TypeError, ValueError) as exc:
        raise ConfigError("functions", f"bad {kind} spec {obj!r}: {exc}") from exc
    raise ConfigError("functions", f"unknown function type {kind!r}")


def to_dict(f: FunctionSpec) -> dict:
    return f.to_dict()


def constant_ones(n: int, horizon: float = 1.0) -> FunctionTuple:
    return FunctionTuple((ONE,) * n, horizon)


def is_constant_one(f: FunctionSpec) -> bool:
    return isinstance(f, Poly) and f.coeffs == (1.0,)


def make_tuple(funcs: Sequence[FunctionSpec], horizon: float = 1.0) -> FunctionTuple:
    return FunctionTuple(tuple(funcs), horizon)
