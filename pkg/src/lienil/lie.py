"""Commutator structure of matrix algebras."""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field as dc_field
from itertools import permutations
from typing import Sequence

import numpy as np

from lienil.algebra import MatrixAlgebra, iter_elements
from lienil.linalg import Matrix, ShapeError, Subspace, basis_tensor, pairwise_brackets


def bracket(a: Matrix, b: Matrix) -> Matrix:
    """The commutator ``ab - ba``."""
    return a @ b - b @ a


def left_normed(xs: Sequence[Matrix]) -> Matrix:
    """``[[...[[x1, x2], x3]...], xm]``; a single element is returned as is."""
    if not xs:
        raise ValueError("left_normed needs at least one matrix")
    acc = xs[0]
    for x in xs[1:]:
        acc = bracket(acc, x)
    return acc


def bracket_space(a: Subspace, b: Subspace) -> Subspace:
    """Span of ``[x, y]`` over basis elements ``x`` of ``a`` and ``y`` of ``b``."""
    if a.is_zero() or b.is_zero():
        return Subspace.zero(a.field, a.ambient_dim)
    brackets = pairwise_brackets(a.field, basis_tensor(a), basis_tensor(b), span_only=True)
    return Subspace.span(a.field, a.ambient_dim, brackets)


def lower_central_series(r: MatrixAlgebra) -> list[Subspace]:
    """``[S1, S2, ...]`` with ``S1`` the carrier and ``S(k+1) = [S(k), R]``.

    The list always has at least two terms and ends at the first term that is
    zero or equal to its predecessor.
    """
    series = [r.carrier]
    while True:
        nxt = bracket_space(series[-1], r.carrier)
        series.append(nxt)
        if nxt.is_zero() or nxt == series[-2]:
            return series


def lie_nilpotence_index(r: MatrixAlgebra) -> int | None:
    """Least ``m >= 1`` with ``S(m+1) = 0``, or None when not Lie nilpotent."""
    series = lower_central_series(r)
    if not series[-1].is_zero():
        return None
    m = len(series) - 1
    # re-check the defining equalities directly
    if m > 1 and series[m - 1].is_zero():
        raise AssertionError("lower central series vanished early")
    if not bracket_space(series[m - 1], r.carrier).is_zero():
        raise AssertionError("lower central series did not vanish where reported")
    return m


def derived_series(r: MatrixAlgebra) -> list[Subspace]:
    """``[g1, g2, ...]`` with ``g(k) = [g(k-1), g(k-1)]``, stopping like
    :func:`lower_central_series`."""
    series = [r.carrier]
    while True:
        nxt = bracket_space(series[-1], series[-1])
        series.append(nxt)
        if nxt.is_zero() or nxt == series[-2]:
            return series


def lie_solvability_index(r: MatrixAlgebra) -> int | None:
    """Least ``m >= 1`` with ``g(m+1) = 0``, or None when not solvable."""
    series = derived_series(r)
    if not series[-1].is_zero():
        return None
    return len(series) - 1


def engel_check_bruteforce(r: MatrixAlgebra, m: int) -> bool:
    """True iff ``[x, y, ..., y] = 0`` (``y`` repeated ``m`` times) for all ``x, y``.

    The bracket is linear in ``x``, so ``x`` ranges over a basis while ``y``
    ranges over every element of the finite algebra.
    """
    if m < 1:
        raise ValueError("Engel index must be positive")
    p = r.field.p
    xs = r.basis_tensor()
    if len(xs) == 0:
        return True
    for ys in iter_elements(r, chunk=1 << 12):
        for x in xs:
            z = np.broadcast_to(x, ys.shape)
            for _ in range(m):
                z = (np.matmul(z, ys) - np.matmul(ys, z)) % p
                if not z.any():
                    break
            if z.any():
                return False
    return True


@dataclass(frozen=True)
class BracketExpansion:
    """``[x1, ..., xm]`` written as a signed sum of words ``x_s(1) ... x_s(m)``.

    ``terms`` maps a permutation of ``1..m`` (as a tuple) to its nonzero
    coefficient.
    """

    m: int
    terms: dict = dc_field(default_factory=dict)

    def coefficient(self, perm: Sequence[int]) -> int:
        return self.terms.get(tuple(perm), 0)

    def check_invariants(self) -> None:
        if any(c not in (-1, 1) for c in self.terms.values()):
            raise AssertionError("coefficient outside {-1, +1}")
        for w in self.terms:
            if sorted(w) != list(range(1, self.m + 1)):
                raise AssertionError(f"{w} is not a permutation")
        fixed = [w for w in self.terms if w[0] == 1]
        if fixed != [tuple(range(1, self.m + 1))] or self.terms[fixed[0]] != 1:
            raise AssertionError("the identity is not the unique term starting with x1")

    def evaluate(self, xs: Sequence[Matrix]) -> Matrix:
        """Sum the words on concrete matrices."""
        if len(xs) != self.m:
            raise ShapeError(f"expected {self.m} matrices, got {len(xs)}")
        f = xs[0].field
        n = xs[0].rows
        total = Matrix.zeros(f, n)
        for word, c in sorted(self.terms.items()):
            prod = xs[word[0] - 1]
            for i in word[1:]:
                prod = prod @ xs[i - 1]
            total = total + prod if c > 0 else total - prod
        return total

    def full_table(self) -> dict:
        """Coefficients for every permutation, zeros included."""
        return {p: self.coefficient(p) for p in permutations(range(1, self.m + 1))}


def expand_left_normed(m: int) -> BracketExpansion:
    """Symbolic expansion of the left-normed bracket of length ``m`` (2..8)."""
    if not 2 <= m <= 8:
        raise ValueError("expand_left_normed supports 2 <= m <= 8")
    terms: dict[tuple[int, ...], int] = {(1,): 1}
    for k in range(2, m + 1):
        nxt: dict[tuple[int, ...], int] = defaultdict(int)
        for w, c in terms.items():
            nxt[w + (k,)] += c
            nxt[(k,) + w] -= c
        terms = {w: c for w, c in nxt.items() if c}
    out = BracketExpansion(m, terms)
    out.check_invariants()
    return out
