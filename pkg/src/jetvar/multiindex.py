"""Multi-indices N = (n_1, ..., n_p) labelling jet coordinates.

Axes are 0-based throughout the package: ``shift(N, 0, +1)`` raises the
count of the first base coordinate.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from functools import total_ordering
from typing import Iterator

from .errors import DecrementBelowZero, DimensionMismatch


@total_ordering
@dataclass(frozen=True)
class MultiIndex:
    counts: tuple[int, ...]

    def __post_init__(self):
        counts = tuple(int(c) for c in self.counts)
        if not counts:
            raise ValueError("a multi-index needs p >= 1 components")
        if any(c < 0 for c in counts):
            raise ValueError(f"negative count in multi-index {counts}")
        object.__setattr__(self, "counts", counts)

    @classmethod
    def zero(cls, p: int) -> MultiIndex:
        return cls((0,) * p)

    @classmethod
    def unit(cls, p: int, i: int) -> MultiIndex:
        return cls(tuple(1 if k == i else 0 for k in range(p)))

    @property
    def p(self) -> int:
        return len(self.counts)

    @property
    def order(self) -> int:
        return sum(self.counts)

    @property
    def factorial(self) -> int:
        return math.prod(math.factorial(c) for c in self.counts)

    @property
    def sort_key(self):
        # graded, then lexicographic on counts
        return (sum(self.counts), self.counts)

    def __lt__(self, other):
        if not isinstance(other, MultiIndex):
            return NotImplemented
        return self.sort_key < other.sort_key

    def __getitem__(self, i):
        return self.counts[i]

    def __iter__(self):
        return iter(self.counts)

    def __len__(self):
        return len(self.counts)

    def __add__(self, other: MultiIndex) -> MultiIndex:
        _check_same_p(self, other)
        return MultiIndex(tuple(a + b for a, b in zip(self.counts, other.counts)))

    def __sub__(self, other: MultiIndex) -> MultiIndex:
        _check_same_p(self, other)
        diff = tuple(a - b for a, b in zip(self.counts, other.counts))
        if any(c < 0 for c in diff):
            raise DecrementBelowZero(f"{self.counts} - {other.counts} has a negative entry")
        return MultiIndex(diff)

    def __repr__(self):
        return f"MultiIndex{self.counts}"


def _check_same_p(m: MultiIndex, n: MultiIndex) -> None:
    if len(m.counts) != len(n.counts):
        raise DimensionMismatch(f"multi-indices of length {len(m.counts)} and {len(n.counts)}")


def mi_shift(n: MultiIndex, i: int, delta: int) -> MultiIndex:
    """Return ``n`` with component ``i`` changed by ``delta`` (+1 or -1)."""
    if delta not in (1, -1):
        raise ValueError("delta must be +1 or -1")
    if not 0 <= i < n.p:
        raise IndexError(f"axis {i} out of range for p={n.p}")
    if delta == -1 and n.counts[i] == 0:
        raise DecrementBelowZero(f"component {i} of {n.counts} is already 0")
    counts = list(n.counts)
    counts[i] += delta
    return MultiIndex(tuple(counts))


def mi_order(n: MultiIndex) -> int:
    return n.order


def mi_factorial(n: MultiIndex) -> int:
    return n.factorial


def mi_leq(m: MultiIndex, n: MultiIndex) -> bool:
    """Componentwise partial order."""
    _check_same_p(m, n)
    return all(a <= b for a, b in zip(m.counts, n.counts))


def _compositions(p: int, k: int) -> Iterator[tuple[int, ...]]:
    """All tuples of p non-negative ints summing to k, lexicographically ascending."""
    if p == 1:
        yield (k,)
        return
    for first in range(k + 1):
        for rest in _compositions(p - 1, k - first):
            yield (first,) + rest


def mi_enumerate(p: int, kmax: int) -> list[MultiIndex]:
    """Every multi-index with |N| <= kmax, ordered by (|N|, counts)."""
    if p < 1 or kmax < 0:
        raise ValueError("need p >= 1 and kmax >= 0")
    return [MultiIndex(c) for k in range(kmax + 1) for c in _compositions(p, k)]


def mi_of_order(p: int, k: int) -> list[MultiIndex]:
    return [MultiIndex(c) for c in _compositions(p, k)]


def mi_below(n: MultiIndex) -> Iterator[MultiIndex]:
    """All K with K <= n componentwise."""
    for c in itertools.product(*(range(v + 1) for v in n.counts)):
        yield MultiIndex(c)


def binomial(n: MultiIndex, k: MultiIndex) -> int:
    return math.prod(math.comb(a, b) for a, b in zip(n.counts, k.counts))
