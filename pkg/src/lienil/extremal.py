"""Block-triangular algebras ``F I + span{E_ij : (i, j) in B}`` attaining the bound."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from lienil.algebra import MatrixAlgebra, nilpotency_degree, radical_triangular
from lienil.bounds import CompositionVector, balanced_composition, m_closed_form
from lienil.fields import FieldSpec
from lienil.linalg import Matrix, Subspace


@dataclass(frozen=True)
class BlockArray:
    """Positions ``(i, j)`` (1-based, ``i < j``) of the staircase block pattern."""

    n: int
    positions: frozenset

    def __post_init__(self):
        for i, j in self.positions:
            if not 1 <= i < j <= self.n:
                raise ValueError(f"position {(i, j)} is not strictly upper triangular in size {self.n}")

    def __len__(self):
        return len(self.positions)

    def sorted(self) -> list[tuple[int, int]]:
        return sorted(self.positions)


def _as_composition(k) -> CompositionVector:
    k = k if isinstance(k, CompositionVector) else CompositionVector(k)
    if any(part < 1 for part in k):
        raise ValueError(f"type algebras need positive parts, got {k.parts}")
    return k


def block_array(k) -> BlockArray:
    """``B = B_1 u ... u B_(l-1)`` with ``B_p = {s_(p-1) < i <= s_p < j <= n}``,
    ``s_p = k_1 + ... + k_p``."""
    k = _as_composition(k)
    if k.length < 2:
        raise ValueError("a block array needs at least two parts")
    n = k.n
    positions = set()
    s = 0
    for part in k.parts[:-1]:
        lo, s = s, s + part
        positions.update((i, j) for i in range(lo + 1, s + 1) for j in range(s + 1, n + 1))
    return BlockArray(n, frozenset(positions))


def type_generators(field: FieldSpec, k) -> list[Matrix]:
    """``I`` followed by the matrix units on the block array (the internal layer is 0-based)."""
    k = _as_composition(k)
    n = k.n
    gens = [Matrix.identity(field, n)]
    if k.length >= 2:
        gens.extend(Matrix.unit(field, n, i - 1, j - 1) for i, j in block_array(k).sorted())
    return gens


def type_algebra(field: FieldSpec, k, verify: bool = True) -> MatrixAlgebra:
    """``F I + span{E_ij : (i, j) in B}``.

    With ``verify`` the carrier is checked closed, its radical is checked to be
    exactly the matrix-unit span and ``J^l = 0`` with ``l`` the number of parts.
    A single part gives ``F I``.
    """
    k = _as_composition(k)
    n = k.n
    gens = type_generators(field, k)
    rows = np.stack([g.flatten() for g in gens])
    carrier = Subspace.span(field, n * n, rows)
    alg = MatrixAlgebra(field, n, carrier, unital=True, verify=verify)
    if verify:
        j = radical_triangular(alg)
        units = Subspace.span(field, n * n, rows[1:]) if len(gens) > 1 else Subspace.zero(field, n * n)
        if j != units:
            raise AssertionError("radical differs from the block matrix units")
        if nilpotency_degree(j) > k.length:
            raise AssertionError("radical is not nilpotent of the expected degree")
    return alg


def type_algebra_dimension(k) -> int:
    """Dimension of the type algebra, cross-checked three ways."""
    k = _as_composition(k)
    parts = k.parts
    n = k.n
    half = (n * n - k.norm_sq) // 2 + 1
    pairs = sum(parts[i] * parts[j] for i in range(len(parts)) for j in range(i + 1, len(parts))) + 1
    telescoping, s = 1, 0
    for part in parts:
        s += part
        telescoping += part * (n - s)
    if not half == pairs == telescoping:
        raise AssertionError(f"dimension formulas disagree for {parts}: {half}, {pairs}, {telescoping}")
    return half


def balanced_extremal(field: FieldSpec, length: int, n: int) -> MatrixAlgebra:
    """Type algebra on the balanced composition; its dimension is ``M(l, n)``."""
    if not 2 <= length <= n:
        raise ValueError("balanced_extremal needs 2 <= l <= n")
    alg = type_algebra(field, balanced_composition(length, n))
    if alg.dim != m_closed_form(length, n):
        raise AssertionError("balanced extremal algebra misses M(l, n)")
    return alg


def upper_constant_diagonal(field: FieldSpec, n: int) -> MatrixAlgebra:
    """All upper triangular matrices with constant diagonal (type ``(1, ..., 1)``)."""
    return type_algebra(field, [1] * n)


def strictly_upper_units(field: FieldSpec, n: int) -> list[Matrix]:
    return [Matrix.unit(field, n, i, j) for i in range(n) for j in range(i + 1, n)]


def subalgebra_from_units(field: FieldSpec, n: int, units: Sequence[tuple[int, int]]) -> MatrixAlgebra:
    """``F I + span`` of the given 1-based positions; closure is verified, not assumed."""
    gens = [Matrix.identity(field, n)] + [Matrix.unit(field, n, i - 1, j - 1) for i, j in units]
    return MatrixAlgebra(field, n, Subspace.span(field, n * n, np.stack([g.flatten() for g in gens])))
