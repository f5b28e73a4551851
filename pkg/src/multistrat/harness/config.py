"""Experiment configuration and its JSON form."""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, replace
from typing import Optional

from ..errors import ConfigError
from ..funcs import FunctionTuple, from_dict

FAMILIES = ("polygonal", "transport")


@dataclass(frozen=True)
class ExperimentConfig:
    T: float = 1.0
    n: int = 2
    functions: tuple = ()
    N: int = 2**14
    delta: Optional[float] = None
    m_values: tuple = ()
    num_paths: int = 50
    master_seed: int = 0
    family: str = "polygonal"
    output: Optional[str] = None
    workers: int = 1
    rule: str = "corrected"
    record_timing: bool = False

    def __post_init__(self):
        self.validate()

    @property
    def integrands(self) -> FunctionTuple:
        return FunctionTuple(tuple(self.functions), self.T)

    @property
    def quad_delta(self) -> float:
        return self.T / 2**14 if self.delta is None else self.delta

    def validate(self) -> None:
        if not (isinstance(self.T, (int, float)) and math.isfinite(self.T) and self.T > 0):
            raise ConfigError("T", f"must be a positive number, got {self.T!r}")
        if not (isinstance(self.n, int) and self.n >= 1):
            raise ConfigError("n", f"must be an integer >= 1, got {self.n!r}")
        if len(self.functions) != self.n:
            raise ConfigError("functions", f"expected {self.n} functions, got {len(self.functions)}")
        if not (isinstance(self.N, int) and self.N >= 1):
            raise ConfigError("N", f"must be an integer >= 1, got {self.N!r}")
        if self.delta is not None and not self.delta > 0:
            raise ConfigError("delta", "must be positive")
        if self.family not in FAMILIES:
            raise ConfigError("family", f"must be one of {FAMILIES}, got {self.family!r}")
        if not (isinstance(self.num_paths, int) and self.num_paths >= 1):
            raise ConfigError("num_paths", "must be an integer >= 1")
        if not (isinstance(self.master_seed, int) and 0 <= self.master_seed < 2**64):
            raise ConfigError("master_seed", "must be an unsigned 64-bit integer")
        if not (isinstance(self.workers, int) and self.workers >= 1):
            raise ConfigError("workers", "must be an integer >= 1")
        if self.rule not in ("corrected", "trapezoid"):
            raise ConfigError("rule", f"unknown quadrature rule {self.rule!r}")
        for m in self.m_values:
            if not m > 0:
                raise ConfigError("m_values", f"entries must be positive, got {m!r}")
            if self.family == "polygonal":
                if int(m) != m or self.N % int(m):
                    raise ConfigError("m_values", f"m={m} does not divide N={self.N}")

    def with_overrides(self, **kw) -> "ExperimentConfig":
        kw = {k: v for k, v in kw.items() if v is not None}
        return replace(self, **kw) if kw else self

    @classmethod
    def from_dict(cls, obj: dict) -> "ExperimentConfig":
        if not isinstance(obj, dict):
            raise ConfigError("<root>", "config must be a JSON object")
        known = {"T", "n", "functions", "N", "delta", "m_values", "num_paths", "master_seed", "family", "output", "workers", "rule"}
        unknown = set(obj) - known
        if unknown:
            raise ConfigError(sorted(unknown)[0], "unknown config key")
        kw = dict(obj)
        if "functions" in kw:
            if not isinstance(kw["functions"], list):
                raise ConfigError("functions", "must be a list")
            kw["functions"] = tuple(from_dict(f) for f in kw["functions"])
        if "m_values" in kw:
            if not isinstance(kw["m_values"], list):
                raise ConfigError("m_values", "must be a list")
            kw["m_values"] = tuple(kw["m_values"])
        if "T" in kw and isinstance(kw["T"], int):
            kw["T"] = float(kw["T"])
        return cls(**kw)

    @classmethod
    def from_json(cls, path: str) -> "ExperimentConfig":
        try:
            with open(path) as fh:
                obj = json.load(fh)
        except OSError as exc:
            raise ConfigError("<file>", str(exc)) from exc
        except json.JSONDecodeError as exc:
            raise ConfigError("<file>", f"invalid JSON: {exc}") from exc
        return cls.from_dict(obj)

    def to_dict(self) -> dict:
        return {
            "T": self.T,
            "n": self.n,
            "functions": [f.to_dict() for f in self.functions],
            "N": self.N,
            "delta": self.delta,
            "m_values": list(self.m_values),
            "num_paths": self.num_paths,
            "master_seed": self.master_seed,
            "family": self.family,
            "output": self.output,
        }
