"""The composition bound M(l, n) and its closed-form analysis."""

from __future__ import annotations

from fractions import Fraction
from math import comb
from typing import Iterator, Sequence

import numpy as np

ENUMERATION_LIMIT = 5 * 10**6


class CompositionVector:
    """An ordered tuple of nonnegative integers; ``n`` is their sum."""

    __slots__ = ("_parts",)

    def __init__(self, parts: Sequence[int]):
        parts = tuple(int(k) for k in parts)
        if not parts:
            raise ValueError("a composition needs at least one part")
        if any(k < 0 for k in parts):
            raise ValueError(f"negative part in {parts}")
        self._parts = parts

    @property
    def parts(self) -> tuple[int, ...]:
        return self._parts

    @property
    def length(self) -> int:
        return len(self._parts)

    @property
    def n(self) -> int:
        return sum(self._parts)

    @property
    def norm_sq(self) -> int:
        return sum(k * k for k in self._parts)

    @property
    def support(self) -> tuple[int, ...]:
        """1-based indices of the positive parts."""
        return tuple(i + 1 for i, k in enumerate(self._parts) if k > 0)

    def objective(self) -> int:
        """``(n^2 - |k|^2) / 2 + 1``."""
        twice = self.n**2 - self.norm_sq
        assert twice % 2 == 0
        return twice // 2 + 1

    def is_balanced(self) -> bool:
        return max(self._parts) - min(self._parts) <= 1

    def __iter__(self):
        return iter(self._parts)

    def __len__(self):
        return len(self._parts)

    def __getitem__(self, i):
        return self._parts[i]

    def __eq__(self, other) -> bool:
        if isinstance(other, CompositionVector):
            return self._parts == other._parts
        if isinstance(other, tuple):
            return self._parts == other
        return NotImplemented

    def __hash__(self):
        return hash(self._parts)

    def __repr__(self):
        return f"CompositionVector{self._parts}"

    @classmethod
    def parse(cls, text: str) -> CompositionVector:
        try:
            return cls([int(t) for t in text.split(",")])
        except ValueError:
            raise ValueError(f"bad composition {text!r}; expected comma-separated integers") from None


def compositions(n: int, length: int) -> Iterator[tuple[int, ...]]:
    """All tuples of ``length`` nonnegative integers summing to ``n``."""
    if length == 1:
        yield (n,)
        return
    for first in range(n, -1, -1):
        for rest in compositions(n - first, length - 1):
            yield (first,) + rest


def positive_compositions(n: int) -> Iterator[tuple[int, ...]]:
    """All compositions of ``n`` into positive parts (any number of parts)."""
    if n == 0:
        yield ()
        return
    for first in range(1, n + 1):
        for rest in positive_compositions(n - first):
            yield (first,) + rest


def _composition_array(n: int, length: int) -> np.ndarray:
    """Every composition as a row of an int array, via stars and bars."""
    from itertools import combinations

    bars = np.array(list(combinations(range(n + length - 1), length - 1)), dtype=np.int64).reshape(-1, length - 1)
    lo = np.concatenate([np.full((len(bars), 1), -1), bars], axis=1)
    hi = np.concatenate([bars, np.full((len(bars), 1), n + length - 1)], axis=1)
    return hi - lo - 1


def composition_count(length: int, n: int) -> int:
    return comb(n + length - 1, length - 1)


def m_bruteforce(length: int, n: int) -> tuple[int, set[CompositionVector]]:
    """Exact maximum of the objective over all compositions and every maximizer."""
    if length < 1 or n < 0:
        raise ValueError("need length >= 1 and n >= 0")
    count = composition_count(length, n)
    if count > ENUMERATION_LIMIT:
        raise ValueError(f"{count} compositions exceed the brute-force limit; use m_closed_form")
    if length == 1:
        return 1, {CompositionVector((n,))}
    comps = _composition_array(n, length)
    sq = (comps * comps).sum(axis=1)
    best = int(sq.min())
    twice = n * n - best
    assert twice % 2 == 0
    winners = {CompositionVector(row) for row in comps[sq == best].tolist()}
    return twice // 2 + 1, winners


def balanced_composition(length: int, n: int) -> CompositionVector:
    """``l - r`` parts ``n // l`` followed by ``r`` parts ``n // l + 1``, ``r = n mod l``."""
    if length < 1 or length > n:
        raise ValueError("balanced_composition needs 1 <= l <= n")
    q, r = divmod(n, length)
    d = CompositionVector([q] * (length - r) + [q + 1] * r)
    # |d|^2 = (n^2 - r^2)/l + r
    assert d.norm_sq * length == n * n - r * r + r * length
    return d


def m_closed_form(length: int, n: int) -> int:
    """``M(l, n)`` without enumeration."""
    if length < 1 or n < 1:
        raise ValueError("need l >= 1 and n >= 1")
    if length > n:
        return (n * n - n) // 2 + 1
    return balanced_composition(length, n).objective()


def floor_bound(length: int, n: int) -> int:
    """``floor(n^2 (l - 1) / (2 l)) + 1``, an upper bound for ``M(l, n)``."""
    if length < 1 or n < 0:
        raise ValueError("need l >= 1")
    return (n * n * (length - 1)) // (2 * length) + 1


def deficiency(r: int, length: int) -> Fraction:
    """``(r - r^2 / l) / 2``, the gap between the real relaxation and ``M`` at ``r = n mod l``."""
    if length < 1 or not 0 <= r < length:
        raise ValueError("need 0 <= r < l")
    return Fraction(r * length - r * r, 2 * length)


def equality_region(length: int, n: int) -> bool:
    """Whether ``M(l, n)`` equals :func:`floor_bound`, decided from ``(r, l)`` alone."""
    if not 1 <= length <= n:
        raise ValueError("need 1 <= l <= n")
    r = n % length
    if length <= 7:
        return True
    if r <= 2:
        return True
    if r >= 7 and length in (r + 1, r + 2):
        return True
    # (6, 8) satisfies D < 1 as well: n = 14, l = 8 gives M = 86 = floor bound
    return (r, length) in {(3, 8), (5, 8), (6, 8)}
