"""Matrix subalgebras: closure, radicals, annihilators, idempotents, triangularization."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Sequence

import numpy as np

from lienil.fields import EXTENSION, PRIME, FieldError, FieldSpec, embed_raw
from lienil.linalg import (
    Matrix,
    ShapeError,
    Subspace,
    basis_tensor,
    complement_within,
    kernel_of_action,
    matrices_to_subspace,
    module_product,
    nullspace_array,
    pairwise_brackets,
    pairwise_products,
    product_space,
    rref_array,
)

BRUTE_FORCE_LIMIT = 10**6


class AlgebraError(ValueError):
    """A structural precondition on an algebra does not hold."""


class NotTriangularError(AlgebraError):
    pass


class NotSplitLocalError(AlgebraError):
    pass


class TooLargeError(AlgebraError):
    """The algebra has too many elements for exhaustive enumeration."""


class PeirceRefusedError(AlgebraError):
    """Some idempotent is not central, so no central Peirce decomposition exists."""

    def __init__(self, message: str, noncentral: list[Matrix]):
        super().__init__(message)
        self.noncentral = noncentral


class MatrixAlgebra:
    """A multiplicatively closed subspace of ``n x n`` matrices.

    The carrier is a :class:`Subspace` of ``F^(n*n)``.  Construction checks
    closure (and that ``I`` is present when ``unital``) unless ``verify`` is
    False.
    """

    __slots__ = ("field", "n", "carrier", "unital")

    def __init__(self, field: FieldSpec, n: int, carrier: Subspace, unital: bool = True, verify: bool = True):
        if carrier.ambient_dim != n * n or carrier.field != field:
            raise ShapeError("carrier does not live in the n x n matrices over this field")
        self.field = field
        self.n = n
        self.carrier = carrier
        self.unital = unital
        if verify:
            if unital and not carrier.contains_vector(field.eye(n).reshape(-1)):
                raise AlgebraError("unital algebra must contain the identity")
            if not self.is_closed():
                raise AlgebraError("subspace is not closed under multiplication")

    @property
    def dim(self) -> int:
        return self.carrier.rank

    def basis_tensor(self) -> np.ndarray:
        return basis_tensor(self.carrier)

    def basis(self) -> list[Matrix]:
        return [Matrix.wrap(self.field, m.copy()) for m in self.basis_tensor()]

    def is_closed(self) -> bool:
        b = self.basis_tensor()
        if len(b) == 0:
            return True
        prods = pairwise_products(self.field, b, b, span_only=True)
        return Subspace.span(self.field, self.n * self.n, np.concatenate([self.carrier.basis, prods])).rank == self.dim

    def contains(self, m: Matrix) -> bool:
        return self.carrier.contains_vector(m.flatten())

    def is_triangular(self) -> bool:
        return all(m.is_upper_triangular() for m in self.basis())

    def in_constant_diagonal_upper(self) -> bool:
        """Every element upper triangular with constant main diagonal."""
        return all(m.is_constant_diagonal_upper() for m in self.basis())

    def __eq__(self, other) -> bool:
        return isinstance(other, MatrixAlgebra) and self.n == other.n and self.carrier == other.carrier

    def __hash__(self):
        return hash((self.n, self.carrier))

    def __repr__(self):
        return f"MatrixAlgebra<{self.field.label}, n={self.n}, dim={self.dim}>"


def identity_vector(field: FieldSpec, n: int) -> np.ndarray:
    return field.eye(n).reshape(1, -1)


def scalar_algebra(field: FieldSpec, n: int) -> MatrixAlgebra:
    """``F I_n``."""
    return MatrixAlgebra(field, n, Subspace.span(field, n * n, identity_vector(field, n)), verify=False)


def full_matrix_algebra(field: FieldSpec, n: int) -> MatrixAlgebra:
    return MatrixAlgebra(field, n, Subspace.full(field, n * n), verify=False)


def close_subspace(field: FieldSpec, n: int, start: Subspace) -> Subspace:
    """Smallest multiplicatively closed subspace containing ``start``."""
    s = start
    new = s
    while not new.is_zero():
        b = basis_tensor(s)
        nb = basis_tensor(new)
        prods = np.concatenate([pairwise_products(field, nb, b, True), pairwise_products(field, b, nb, True)])
        t = Subspace.span(field, n * n, np.concatenate([s.basis, prods]))
        if t.rank == s.rank:
            break
        # only products involving the enlargement need recomputing next round
        new = complement_within(s, t)
        s = t
    return s


def close_generators(field: FieldSpec, n: int, generators: Sequence[Matrix], unital: bool = True) -> MatrixAlgebra:
    """Subalgebra generated by ``generators`` (and ``I`` when ``unital``)."""
    rows = []
    for g in generators:
        if g.field != field:
            raise FieldError(f"generator over {g.field.label}, expected {field.label}")
        if g.shape != (n, n):
            raise ShapeError(f"generator of shape {g.shape}, expected ({n}, {n})")
        rows.append(g.flatten())
    if unital:
        rows.append(field.eye(n).reshape(-1))
    start = Subspace.span(field, n * n, np.stack(rows)) if rows else Subspace.zero(field, n * n)
    return MatrixAlgebra(field, n, close_subspace(field, n, start), unital=unital, verify=False)


def strictly_upper_columns(n: int) -> list[int]:
    return [i * n + j for i in range(n) for j in range(i + 1, n)]


def restrict_to_columns(s: Subspace, allowed: Sequence[int]) -> Subspace:
    """Vectors of ``s`` whose coordinates outside ``allowed`` all vanish."""
    if s.is_zero():
        return s
    field = s.field
    allowed_set = set(allowed)
    outside = [c for c in range(s.ambient_dim) if c not in allowed_set]
    if not outside:
        return s
    coeffs = nullspace_array(field, s.basis[:, outside].T)
    if coeffs.shape[0] == 0:
        return Subspace.zero(field, s.ambient_dim)
    return Subspace.span(field, s.ambient_dim, field.matmul(coeffs, s.basis))


def nilpotency_degree(j: Subspace) -> int:
    """Least ``k >= 1`` with ``J^k = 0``; raises if ``J`` is not nilpotent."""
    n = int(round(j.ambient_dim**0.5))
    power, k = j, 1
    while not power.is_zero():
        nxt = product_space(power, j)
        if nxt == power or k > n:
            raise AlgebraError("subspace is not nilpotent")
        power, k = nxt, k + 1
    return k


def is_ideal(carrier: Subspace, j: Subspace) -> bool:
    return carrier.contains(j) and j.contains(product_space(carrier, j)) and j.contains(product_space(j, carrier))


def radical_triangular(r: MatrixAlgebra, verify: bool = True) -> Subspace:
    """Jacobson radical of an algebra of upper triangular matrices.

    The radical is the strictly upper triangular part of the carrier.  With
    ``verify`` the result is checked to be a nilpotent two-sided ideal.
    """
    n = r.n
    lower = [i * n + j for i in range(n) for j in range(i)]
    if lower and any(bool(x) for x in r.carrier.basis[:, lower].flat):
        raise NotTriangularError("carrier is not upper triangular; use triangularize_local first")
    j = restrict_to_columns(r.carrier, strictly_upper_columns(n))
    if verify:
        if nilpotency_degree(j) > n:
            raise AlgebraError("radical failed the nilpotency check")
        if not is_ideal(r.carrier, j):
            raise AlgebraError("radical failed the ideal check")
    return j


def radical_trace_form(r: MatrixAlgebra) -> Subspace:
    """Radical over Q as the kernel of the trace form ``(a, b) -> tr(ab)``.

    Valid in characteristic zero only (Dickson's criterion).
    """
    if r.field.characteristic != 0:
        raise FieldError("the trace-form radical needs characteristic zero")
    b = r.basis_tensor()
    k = len(b)
    if k == 0:
        return r.carrier
    prods = pairwise_products(r.field, b, b).reshape(k, k, r.n, r.n)
    gram = np.empty((k, k), dtype=object)
    for i in range(k):
        for jj in range(k):
            gram[i, jj] = sum(prods[i, jj].diagonal(), r.field.zero)
    coeffs = nullspace_array(r.field, gram)
    if coeffs.shape[0] == 0:
        return Subspace.zero(r.field, r.n * r.n)
    return Subspace.span(r.field, r.n * r.n, r.field.matmul(coeffs, r.carrier.basis))


def annihilator(ideal: Subspace, x: Subspace) -> Subspace:
    """Elements ``a`` of ``ideal`` with ``X a = 0``."""
    return kernel_of_action(x, ideal)


def center(r: MatrixAlgebra) -> Subspace:
    """Elements of the carrier commuting with every basis element."""
    b = r.basis_tensor()
    k = len(b)
    if k == 0:
        return r.carrier
    br = pairwise_brackets(r.field, b, b).reshape(k, -1)  # row j: [b_j, b_i] for all i
    coeffs = nullspace_array(r.field, br.T)
    if coeffs.shape[0] == 0:
        return Subspace.zero(r.field, r.n * r.n)
    return Subspace.span(r.field, r.n * r.n, r.field.matmul(coeffs, r.carrier.basis))


def conjugate(r: MatrixAlgebra, u: Matrix) -> MatrixAlgebra:
    """The algebra ``U^-1 R U``."""
    if u.field != r.field or u.shape != (r.n, r.n):
        raise ShapeError("conjugating matrix has the wrong field or size")
    uinv = u.inverse()  # raises on singular input
    b = r.basis_tensor()
    f = r.field
    if len(b):
        conj = f.reduce(np.matmul(f.reduce(np.matmul(uinv.data[None], b)), u.data[None]))
        carrier = Subspace.span(f, r.n * r.n, conj.reshape(len(b), -1))
    else:
        carrier = Subspace.zero(f, r.n * r.n)
    return MatrixAlgebra(f, r.n, carrier, unital=r.unital, verify=False)


def extend_scalars(r: MatrixAlgebra, target: FieldSpec) -> MatrixAlgebra:
    """``R`` tensored up from GF(p) to GF(p^k), realized inside ``M_n(GF(p^k))``."""
    if r.field.kind != PRIME or target.kind != EXTENSION or target.p != r.field.p:
        raise FieldError(f"characteristic mismatch: {r.field.label} -> {target.label}")
    src = r.carrier.basis
    img = np.empty(src.shape, dtype=object)
    for idx, v in np.ndenumerate(src):
        img[idx] = embed_raw(r.field, target, v)
    carrier = Subspace.span(target, r.n * r.n, img) if src.shape[0] else Subspace.zero(target, r.n * r.n)
    out = MatrixAlgebra(target, r.n, carrier, unital=r.unital, verify=True)
    if out.dim != r.dim:
        raise AlgebraError("scalar extension changed the dimension")
    return out


# --- exhaustive enumeration over small prime fields -----------------------

def _require_enumerable(r: MatrixAlgebra) -> None:
    if not r.field.uses_kernel:
        raise FieldError("exhaustive enumeration needs a small prime field")
    if r.field.p ** r.dim > BRUTE_FORCE_LIMIT:
        raise TooLargeError(
            f"{r.field.label} algebra of dimension {r.dim} has {r.field.p}^{r.dim} elements; "
            f"brute force is limited to {BRUTE_FORCE_LIMIT}"
        )


def iter_elements(r: MatrixAlgebra, chunk: int = 1 << 14) -> Iterator[np.ndarray]:
    """All elements of a finite algebra, in chunks of shape ``(m, n, n)``."""
    _require_enumerable(r)
    p, k, n = r.field.p, r.dim, r.n
    total = p**k
    weights = p ** np.arange(k - 1, -1, -1, dtype=np.int64)
    for start in range(0, total, chunk):
        idx = np.arange(start, min(start + chunk, total), dtype=np.int64)
        coeffs = (idx[:, None] // weights[None, :]) % p
        yield ((coeffs @ r.carrier.basis) % p).reshape(-1, n, n)


def idempotents(r: MatrixAlgebra) -> list[Matrix]:
    """Every ``e`` in the carrier with ``e^2 = e`` (brute force)."""
    out = []
    p = r.field.p
    for block in iter_elements(r):
        sq = np.matmul(block, block) % p
        hits = np.flatnonzero(np.all((sq == block).reshape(len(block), -1), axis=1))
        out.extend(Matrix.wrap(r.field, block[h].copy()) for h in hits)
    return out


def corner_space(carrier: Subspace, e: Matrix) -> Subspace:
    """``e S e`` for a matrix subspace ``S``."""
    n = e.rows
    f = e.field
    b = basis_tensor(carrier)
    if len(b) == 0:
        return carrier
    c = f.reduce(np.matmul(f.reduce(np.matmul(e.data[None], b)), e.data[None]))
    return Subspace.span(f, n * n, c.reshape(len(b), -1))


def restrict_to_image(r: MatrixAlgebra, e: Matrix) -> MatrixAlgebra:
    """The corner ``eRe`` acting on the row space ``F^n e``, as a unital algebra of
    ``rank(e) x rank(e)`` matrices."""
    f = r.field
    rows, piv = rref_array(f, e.data)
    rk = len(piv)
    corner = corner_space(r.carrier, e)
    mats = basis_tensor(corner)
    if len(mats) == 0:
        return MatrixAlgebra(f, rk, Subspace.zero(f, rk * rk), unital=False, verify=False)
    img = f.reduce(np.matmul(rows[None], mats))  # (k, rk, n), rows of the image
    small = img[:, :, list(piv)]
    carrier = Subspace.span(f, rk * rk, small.reshape(len(mats), -1))
    return MatrixAlgebra(f, rk, carrier, unital=True, verify=True)


@dataclass(frozen=True)
class PeirceFactor:
    idempotent: Matrix
    corner: MatrixAlgebra
    rank: int


def peirce_decompose(r: MatrixAlgebra) -> list[PeirceFactor]:
    """Split ``R`` along its primitive central idempotents (brute force).

    Raises :class:`PeirceRefusedError` if some idempotent is not central.
    """
    _require_enumerable(r)
    f, n = r.field, r.n
    idem = [e for e in idempotents(r) if not e.is_zero()]
    z = center(r)
    noncentral = [e for e in idem if not z.contains_vector(e.flatten())]
    if noncentral:
        raise PeirceRefusedError(
            f"{len(noncentral)} idempotent(s) are not central; the algebra fails the Engel condition",
            noncentral,
        )

    def below(g: Matrix, e: Matrix) -> bool:
        return g != e and (g @ e) == g

    primitive = [e for e in idem if not any(below(g, e) for g in idem)]
    total = Matrix.zeros(f, n)
    for e in primitive:
        total = total + e
    if r.unital and total != Matrix.identity(f, n):
        raise AlgebraError("primitive central idempotents do not sum to the identity")
    factors = []
    for e in primitive:
        corner = MatrixAlgebra(f, n, corner_space(r.carrier, e), unital=False, verify=True)
        factors.append(PeirceFactor(e, corner, e.rank()))
    return factors


# --- triangularization of split local algebras ----------------------------

def _split_eigenvalue(field: FieldSpec, a: np.ndarray, n: int):
    """The unique ``lam`` with ``(a - lam I)^n = 0``, or None."""
    eye = field.eye(n)
    tr = field.zero
    for i in range(n):
        tr = field.add(tr, a[i, i])
    candidates = []
    if field.characteristic == 0 or n % field.characteristic != 0:
        candidates = [field.div(tr, field.from_int(n))]
    else:
        candidates = list(field.elements())
    for lam in candidates:
        m = field.reduce(a - eye * lam)
        power = m
        for _ in range(n - 1):
            power = field.matmul(power, m)
        if not any(bool(x) for x in power.flat):
            return lam
    return None


def nil_part(r: MatrixAlgebra) -> Subspace:
    """The nilpotent complement ``N`` of ``F I`` when ``R = F I + N`` is split local.

    Raises :class:`NotSplitLocalError` otherwise.
    """
    f, n = r.field, r.n
    if not r.carrier.contains_vector(f.eye(n).reshape(-1)):
        raise NotSplitLocalError("not split local over this field: identity missing")
    shifted = []
    for a in r.basis_tensor():
        lam = _split_eigenvalue(f, a, n)
        if lam is None:
            raise NotSplitLocalError("not split local over this field: element without a single eigenvalue")
        shifted.append(f.reduce(a - f.eye(n) * lam).reshape(-1))
    nil = Subspace.span(f, n * n, np.stack(shifted))
    if nil.rank != r.dim - 1:
        raise NotSplitLocalError("not split local over this field: nilpotent part has the wrong dimension")
    if not nil.contains(product_space(nil, nil)):
        raise NotSplitLocalError("not split local over this field: nilpotent part not closed")
    try:
        if nilpotency_degree(nil) > n:
            raise AlgebraError
    except AlgebraError:
        raise NotSplitLocalError("not split local over this field: nilpotent part not nilpotent") from None
    return nil


def triangularize_local(r: MatrixAlgebra) -> Matrix:
    """Invertible ``U`` with ``U^-1 R U`` upper triangular with constant diagonal.

    The new basis follows the flag ``V > V N > V N^2 > ... > 0`` of the row space
    ``V = F^n`` under the nilpotent part ``N``.
    """
    f, n = r.field, r.n
    nil = nil_part(r)
    levels = [Subspace.full(f, n)]
    while not levels[-1].is_zero():
        levels.append(module_product(levels[-1], nil))
    rows = []
    for upper, lower in zip(levels, levels[1:]):
        rows.extend(complement_within(lower, upper).basis)
    b = Matrix.wrap(f, np.stack(rows).copy())
    u = b.inverse()
    if not conjugate(r, u).in_constant_diagonal_upper():
        raise AlgebraError("triangularization post-check failed")
    return u


def block_diagonal_sum(algebras: Sequence[MatrixAlgebra]) -> MatrixAlgebra:
    """Direct sum ``R_1 x R_2 x ...`` embedded block-diagonally."""
    if not algebras:
        raise ValueError("need at least one algebra")
    f = algebras[0].field
    n = sum(a.n for a in algebras)
    rows = []
    offset = 0
    for a in algebras:
        if a.field != f:
            raise FieldError("mixed fields")
        for m in a.basis_tensor():
            big = f.zeros((n, n))
            big[offset : offset + a.n, offset : offset + a.n] = m
            rows.append(big.reshape(-1))
        offset += a.n
    carrier = Subspace.span(f, n * n, np.stack(rows))
    return MatrixAlgebra(f, n, carrier, unital=all(a.unital for a in algebras), verify=True)


def generators_span(field: FieldSpec, n: int, mats: Sequence[Matrix]) -> Subspace:
    return matrices_to_subspace(field, n, mats)
