"""Multi-indices over {1, 2} and their Stratonovich-to-Ito weights.

A multi-index ``alpha = (a_1, ..., a_q)`` with entries in {1, 2} and
``sum(alpha) = n`` describes one iterated Ito/Lebesgue integral: an entry 1 is
a ``dW`` step consuming one integrand, an entry 2 a ``ds`` step consuming two.
The order-``n`` Stratonovich integral is the sum over all such ``alpha`` of
``2**(q - n)`` times the corresponding integral.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .errors import ArgumentError

MAX_ORDER = 10


@dataclass(frozen=True, order=True)
class MultiIndex:
    entries: tuple

    def __post_init__(self):
        entries = tuple(int(a) for a in self.entries)
        if not entries or any(a not in (1, 2) for a in entries):
            raise ArgumentError(f"entries must be a non-empty sequence over {{1, 2}}, got {self.entries!r}")
        object.__setattr__(self, "entries", entries)

    @property
    def order(self) -> int:
        return sum(self.entries)

    @property
    def length(self) -> int:
        return len(self.entries)

    def __len__(self) -> int:
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)

    def __str__(self) -> str:
        return "(" + ",".join(map(str, self.entries)) + ")"


@lru_cache(maxsize=None)
def _sequences(n: int) -> tuple:
    if n == 0:
        return ((),)
    out = [(1,) + rest for rest in _sequences(n - 1)]
    if n >= 2:
        out += [(2,) + rest for rest in _sequences(n - 2)]
    return tuple(out)


def enumerate_gn(n: int, max_order: int = MAX_ORDER) -> list[MultiIndex]:
    """All multi-indices of order ``n`` in lexicographic order."""
    if n < 1:
        raise ArgumentError("n must be >= 1")
    if n > max_order:
        raise ArgumentError(f"n={n} exceeds max_order={max_order}")
    return [MultiIndex(s) for s in _sequences(n)]


def weight(alpha: MultiIndex) -> float:
    return 2.0 ** (alpha.length - alpha.order)


def tabulate(n: int) -> list[tuple[MultiIndex, float]]:
    return [(a, weight(a)) for a in enumerate_gn(n)]
