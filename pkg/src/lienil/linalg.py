"""Dense exact matrices and RREF-canonical subspaces.

Matrices are numpy arrays of raw field values (``int64`` residues for GF(p)
with small p, ``object`` arrays otherwise).  An ``n x n`` matrix is identified
with its row-major flattening in ``F^(n*n)``; that convention is fixed for the
whole package.
"""

from __future__ import annotations

import random
from fractions import Fraction
from math import gcd, lcm
from typing import Iterable, Sequence

import numpy as np

from lienil import kernels
from lienil.fields import RATIONAL, FieldError, FieldSpec, Scalar


class ShapeError(ValueError):
    """Operands with incompatible dimensions or fields."""


def _readonly(a: np.ndarray) -> np.ndarray:
    a.setflags(write=False)
    return a


# --- row reduction ----------------------------------------------------------

def _rref_generic(field: FieldSpec, a: np.ndarray):
    rows = [list(r) for r in a]
    nrows = len(rows)
    ncols = a.shape[1] if a.ndim == 2 else 0
    sub, mul = field.sub, field.mul
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        piv = next((i for i in range(r, nrows) if rows[i][c]), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = field.inv(rows[r][c])
        prow = [mul(x, inv) if x else x for x in rows[r]]
        rows[r] = prow
        support = [j for j in range(c, ncols) if prow[j]]
        for i in range(nrows):
            if i == r:
                continue
            row = rows[i]
            f = row[c]
            if f:
                for j in support:
                    row[j] = sub(row[j], mul(f, prow[j]))
        pivots.append(c)
        r += 1
    out = field.zeros((r, ncols))
    for i in range(r):
        out[i, :] = rows[i]
    return out, tuple(pivots)


def _integer_rows(a: np.ndarray) -> list[list[int]]:
    """Rows of a rational array scaled to integers (row spans are unchanged)."""
    out = []
    for row in a:
        den = lcm(*(x.denominator for x in row)) if len(row) else 1
        ints = [x.numerator * (den // x.denominator) for x in row]
        if any(ints):
            out.append(ints)
    return out


def _rref_rational(a: np.ndarray):
    """Fraction-free Gauss-Jordan over the integers; divides only at the end."""
    ncols = a.shape[1]
    rows = _integer_rows(a)
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        if r == len(rows):
            break
        piv = next((i for i in range(r, len(rows)) if rows[i][c]), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        prow = rows[r]
        pv = prow[c]
        support = [j for j in range(c, ncols) if prow[j]]
        keep = rows[: r + 1]
        for i in range(len(rows)):
            if i == r:
                continue
            row = rows[i]
            f = row[c]
            if f:
                for j in range(ncols):
                    row[j] *= pv
                for j in support:
                    row[j] -= f * prow[j]
                g = 0
                for x in row:
                    if x:
                        g = gcd(g, x)
                if g == 0:
                    row = None
                elif g > 1:
                    row = [x // g for x in row]
                    rows[i] = row
            if i > r and row is not None:
                keep.append(row)
            elif i < r:
                keep[i] = row
        rows = keep
        pivots.append(c)
        r += 1
    out = np.empty((r, ncols), dtype=object)
    zero = Fraction(0)
    for i, c in enumerate(pivots):
        pv = rows[i][c]
        out[i, :] = [Fraction(x, pv) if x else zero for x in rows[i]]
    return out, tuple(pivots)


def rref_array(field: FieldSpec, a: np.ndarray) -> tuple[np.ndarray, tuple[int, ...]]:
    """RREF of a raw 2-D array; returns only the nonzero rows and the pivots."""
    a = np.asarray(a)
    if a.ndim != 2:
        raise ShapeError("rref expects a 2-D array")
    if a.shape[0] == 0:
        return field.zeros((0, a.shape[1])), ()
    if field.uses_kernel:
        return kernels.rref_mod_p(a, field.p)
    if field.kind == RATIONAL:
        return _rref_rational(a)
    return _rref_generic(field, a)


def nullspace_array(field: FieldSpec, a: np.ndarray) -> np.ndarray:
    """Basis (as rows) of ``{x : a @ x = 0}``."""
    a = np.asarray(a)
    ncols = a.shape[1]
    r, pivots = rref_array(field, a)
    free = [c for c in range(ncols) if c not in set(pivots)]
    out = field.zeros((len(free), ncols))
    for k, fc in enumerate(free):
        out[k, fc] = field.one
        for i, pc in enumerate(pivots):
            out[k, pc] = field.neg(r[i, fc])
    return out


# --- matrices ---------------------------------------------------------------

class Matrix:
    """An exact ``rows x cols`` matrix over a field (immutable)."""

    __slots__ = ("field", "data")

    def __init__(self, field: FieldSpec, data, *, _raw: bool = False):
        arr = data if _raw else field.array(data)
        if arr.ndim != 2:
            raise ShapeError("a Matrix needs 2-D data")
        if not _raw or arr.flags.writeable:
            arr = arr.copy()
        self.field = field
        self.data = _readonly(arr)

    @classmethod
    def wrap(cls, field: FieldSpec, arr: np.ndarray) -> Matrix:
        return cls(field, arr, _raw=True)

    @classmethod
    def from_text(cls, field: FieldSpec, rows: Sequence[Sequence[str]]) -> Matrix:
        return cls.wrap(field, field.array([[field.parse_raw(x) for x in r] for r in rows]))

    @classmethod
    def identity(cls, field: FieldSpec, n: int) -> Matrix:
        return cls.wrap(field, field.eye(n))

    @classmethod
    def zeros(cls, field: FieldSpec, rows: int, cols: int | None = None) -> Matrix:
        return cls.wrap(field, field.zeros((rows, rows if cols is None else cols)))

    @classmethod
    def unit(cls, field: FieldSpec, n: int, i: int, j: int) -> Matrix:
        """Matrix unit with a one at 0-based position ``(i, j)``."""
        a = field.zeros((n, n))
        a[i, j] = field.one
        return cls.wrap(field, a)

    @property
    def rows(self) -> int:
        return self.data.shape[0]

    @property
    def cols(self) -> int:
        return self.data.shape[1]

    @property
    def shape(self) -> tuple[int, int]:
        return self.data.shape

    def entry(self, i: int, j: int) -> Scalar:
        return self.field.scalar(self.data[i, j])

    def _same(self, other: Matrix) -> None:
        if not isinstance(other, Matrix):
            raise TypeError("expected a Matrix")
        if other.field != self.field:
            raise FieldError(f"mixed fields {self.field.label} and {other.field.label}")

    def __matmul__(self, other: Matrix) -> Matrix:
        self._same(other)
        if self.cols != other.rows:
            raise ShapeError(f"cannot multiply {self.shape} by {other.shape}")
        return Matrix.wrap(self.field, self.field.matmul(self.data, other.data))

    def __add__(self, other: Matrix) -> Matrix:
        self._same(other)
        if self.shape != other.shape:
            raise ShapeError("shape mismatch")
        return Matrix.wrap(self.field, self.field.reduce(self.data + other.data))

    def __sub__(self, other: Matrix) -> Matrix:
        self._same(other)
        if self.shape != other.shape:
            raise ShapeError("shape mismatch")
        return Matrix.wrap(self.field, self.field.reduce(self.data - other.data))

    def __neg__(self) -> Matrix:
        return Matrix.wrap(self.field, self.field.reduce(-self.data))

    def scale(self, c) -> Matrix:
        c = c.value if isinstance(c, Scalar) else self.field.normalize(c)
        return Matrix.wrap(self.field, self.field.reduce(self.data * c))

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Matrix)
            and other.field == self.field
            and other.shape == self.shape
            and bool(np.all(self.data == other.data))
        )

    def __hash__(self):
        return hash((self.field, self.shape, tuple(map(str, self.data.flat))))

    def is_zero(self) -> bool:
        return not any(bool(x) for x in self.data.flat)

    def is_square(self) -> bool:
        return self.rows == self.cols

    def is_upper_triangular(self) -> bool:
        return not any(bool(self.data[i, j]) for i in range(self.rows) for j in range(min(i, self.cols)))

    def is_constant_diagonal_upper(self) -> bool:
        """Membership in the algebra of upper triangular matrices with constant diagonal."""
        if not (self.is_square() and self.is_upper_triangular()):
            return False
        d = self.data[0, 0] if self.rows else None
        return all(self.data[i, i] == d for i in range(self.rows))

    def transpose(self) -> Matrix:
        return Matrix.wrap(self.field, self.data.T.copy())

    def rank(self) -> int:
        return len(rref_array(self.field, self.data)[1])

    def inverse(self) -> Matrix:
        if not self.is_square():
            raise ShapeError("only square matrices are invertible")
        n = self.rows
        aug = np.concatenate([self.data, self.field.eye(n)], axis=1)
        r, piv = rref_array(self.field, aug)
        if piv[:n] != tuple(range(n)) or len(piv) < n:
            raise ZeroDivisionError("matrix is singular")
        return Matrix.wrap(self.field, r[:n, n:].copy())

    def flatten(self) -> np.ndarray:
        return self.data.reshape(-1)

    def to_text(self) -> list[list[str]]:
        fmt = self.field.format_raw
        return [[fmt(x) for x in row] for row in self.data]

    def __repr__(self):
        body = "; ".join(" ".join(r) for r in self.to_text())
        return f"Matrix<{self.field.label}>[{body}]"


def rref(m: Matrix) -> tuple[Matrix, int, tuple[int, ...]]:
    """Reduced row echelon form of ``m`` (full height, zero rows at the bottom)."""
    r, piv = rref_array(m.field, m.data)
    full = m.field.zeros(m.shape)
    full[: len(piv)] = r
    return Matrix.wrap(m.field, full), len(piv), piv


# --- subspaces --------------------------------------------------------------

class Subspace:
    """A subspace of ``F^N`` held by its unique RREF basis."""

    __slots__ = ("field", "ambient_dim", "basis", "pivots")

    def __init__(self, field: FieldSpec, ambient_dim: int, basis: np.ndarray, pivots: tuple[int, ...]):
        self.field = field
        self.ambient_dim = ambient_dim
        self.basis = _readonly(basis)
        self.pivots = pivots

    @classmethod
    def span(cls, field: FieldSpec, ambient_dim: int, vectors) -> Subspace:
        if isinstance(vectors, np.ndarray) and vectors.ndim == 2:
            arr = vectors
        else:
            vecs = list(vectors)
            arr = field.array(vecs) if vecs else field.zeros((0, ambient_dim))
        if arr.ndim != 2 or (arr.shape[0] and arr.shape[1] != ambient_dim):
            raise ShapeError(f"vectors do not live in F^{ambient_dim}")
        if arr.shape[0] == 0:
            arr = field.zeros((0, ambient_dim))
        r, piv = rref_array(field, arr)
        return cls(field, ambient_dim, r, piv)

    @classmethod
    def zero(cls, field: FieldSpec, ambient_dim: int) -> Subspace:
        return cls(field, ambient_dim, field.zeros((0, ambient_dim)), ())

    @classmethod
    def full(cls, field: FieldSpec, ambient_dim: int) -> Subspace:
        return cls(field, ambient_dim, field.eye(ambient_dim), tuple(range(ambient_dim)))

    @property
    def rank(self) -> int:
        return len(self.pivots)

    dim = rank

    def is_zero(self) -> bool:
        return not self.pivots

    def _compatible(self, other: Subspace) -> None:
        if not isinstance(other, Subspace):
            raise TypeError("expected a Subspace")
        if other.field != self.field:
            raise FieldError("subspaces over different fields")
        if other.ambient_dim != self.ambient_dim:
            raise ShapeError(f"ambient dimensions differ: {self.ambient_dim} vs {other.ambient_dim}")

    def __eq__(self, other) -> bool:
        if not isinstance(other, Subspace):
            return NotImplemented
        return (
            self.field == other.field
            and self.ambient_dim == other.ambient_dim
            and self.pivots == other.pivots
            and bool(np.all(self.basis == other.basis))
        )

    def __hash__(self):
        return hash((self.ambient_dim, self.pivots, tuple(map(str, self.basis.flat))))

    def __repr__(self):
        return f"Subspace<{self.field.label}^{self.ambient_dim}, dim {self.rank}>"

    def sum(self, other: Subspace) -> Subspace:
        self._compatible(other)
        return Subspace.span(self.field, self.ambient_dim, np.concatenate([self.basis, other.basis]))

    __add__ = sum

    def contains_vector(self, v) -> bool:
        v = np.asarray(v).reshape(1, -1)
        if v.shape[1] != self.ambient_dim:
            raise ShapeError("vector length mismatch")
        stacked = np.concatenate([self.basis, self.field.array(v)])
        return len(rref_array(self.field, stacked)[1]) == self.rank

    def contains(self, other: Subspace) -> bool:
        self._compatible(other)
        if other.rank > self.rank:
            return False
        if other.is_zero():
            return True
        return self.sum(other).rank == self.rank

    def intersect(self, other: Subspace) -> Subspace:
        """Intersection via the joint kernel of ``x A - y B = 0``."""
        self._compatible(other)
        if self.is_zero() or other.is_zero():
            return Subspace.zero(self.field, self.ambient_dim)
        stacked = np.concatenate([self.basis, other.basis])  # rows
        z = nullspace_array(self.field, stacked.T)
        if z.shape[0] == 0:
            return Subspace.zero(self.field, self.ambient_dim)
        x = z[:, : self.rank]
        return Subspace.span(self.field, self.ambient_dim, self.field.matmul(x, self.basis))

    __and__ = intersect

    def equals(self, other: Subspace) -> bool:
        self._compatible(other)
        return self == other

    def vectors(self) -> list[np.ndarray]:
        return [row for row in self.basis]


def subspace_ops(a: Subspace, b: Subspace, op: str):
    """Dispatch ``op`` in {sum, intersect, contains, equals}."""
    if op == "sum":
        return a.sum(b)
    if op == "intersect":
        return a.intersect(b)
    if op == "contains":
        return a.contains(b)
    if op == "equals":
        return a.equals(b)
    raise ValueError(f"unknown subspace operation {op!r}")


def is_direct_sum(parts: Sequence[Subspace], whole: Subspace) -> bool:
    """True iff ``whole`` is the internal direct sum of ``parts``."""
    total = Subspace.zero(whole.field, whole.ambient_dim)
    for s in parts:
        total = total.sum(s)
    return total == whole and sum(s.rank for s in parts) == whole.rank


def complement_within(inner: Subspace, outer: Subspace, rng: random.Random | None = None) -> Subspace:
    """A complement ``C`` of ``inner`` inside ``outer``.

    Without ``rng`` the result is deterministic: the RREF basis rows of
    ``outer`` are scanned in order and each row that enlarges the running span
    is kept.  With ``rng`` random combinations of ``outer``'s basis are drawn
    until the span is complete.
    """
    inner._compatible(outer)
    if not outer.contains(inner):
        raise ValueError("inner subspace is not contained in outer subspace")
    field, N = outer.field, outer.ambient_dim
    kept: list[np.ndarray] = []
    current = inner
    target = outer.rank
    if rng is None:
        for row in outer.basis:
            if current.rank == target:
                break
            trial = Subspace.span(field, N, np.concatenate([current.basis, row.reshape(1, -1)]))
            if trial.rank > current.rank:
                kept.append(row)
                current = trial
    else:
        k = outer.rank
        while current.rank < target:
            coeffs = field.array([[field.random(rng) for _ in range(k)]])
            v = field.matmul(coeffs, outer.basis)
            trial = Subspace.span(field, N, np.concatenate([current.basis, v]))
            if trial.rank > current.rank:
                kept.append(v[0])
                current = trial
    if not kept:
        return Subspace.zero(field, N)
    return Subspace.span(field, N, np.stack(kept))


# --- matrix spaces ----------------------------------------------------------

def matrices_to_subspace(field: FieldSpec, n: int, mats: Iterable) -> Subspace:
    """Span of ``n x n`` matrices as a subspace of ``F^(n*n)`` (row-major)."""
    rows = []
    for m in mats:
        arr = m.data if isinstance(m, Matrix) else field.array(m)
        if arr.shape != (n, n):
            raise ShapeError(f"expected {n}x{n} matrices, got {arr.shape}")
        if isinstance(m, Matrix) and m.field != field:
            raise FieldError("matrix over a different field")
        rows.append(arr.reshape(-1))
    if not rows:
        return Subspace.zero(field, n * n)
    return Subspace.span(field, n * n, np.stack(rows))


def subspace_to_matrices(s: Subspace, n: int | None = None) -> list[Matrix]:
    n = _side(s) if n is None else n
    if n * n != s.ambient_dim:
        raise ShapeError(f"ambient dimension {s.ambient_dim} is not {n}^2")
    return [Matrix.wrap(s.field, row.reshape(n, n).copy()) for row in s.basis]


def _side(s: Subspace) -> int:
    n = int(round(s.ambient_dim**0.5))
    if n * n != s.ambient_dim:
        raise ShapeError(f"ambient dimension {s.ambient_dim} is not a square")
    return n


def basis_tensor(s: Subspace) -> np.ndarray:
    """Basis of a matrix subspace as an array of shape ``(rank, n, n)``."""
    n = _side(s)
    return s.basis.reshape(s.rank, n, n)


def pairwise_products(field: FieldSpec, a: np.ndarray, b: np.ndarray, span_only: bool = False) -> np.ndarray:
    """All products ``a[i] @ b[j]``, flattened to shape ``(len(a)*len(b), n*n)``.

    With ``span_only`` each row may come back multiplied by a nonzero scalar
    (over Q the integer numerators are returned), which is enough whenever only
    the span of the products matters.
    """
    if len(a) == 0 or len(b) == 0:
        n = a.shape[-1] if a.ndim == 3 else b.shape[-1]
        return field.zeros((0, n * n))
    n = a.shape[-1]
    if field.uses_kernel:
        prod = np.einsum("xij,yjk->xyik", a, b, optimize=False) % field.p
    elif field.kind == RATIONAL:
        prod = _rational_pair_products(a, b, span_only)
    else:
        prod = field.reduce(np.matmul(a[:, None], b[None, :]))
    return prod.reshape(-1, n * n)


def _scale_matrices(a: np.ndarray):
    """Integer matrices and per-matrix denominators with ``a[i] = ints[i] / dens[i]``."""
    dens = [lcm(*(x.denominator for x in m.flat)) for m in a]
    ints = np.empty(a.shape, dtype=object)
    for k, (m, d) in enumerate(zip(a, dens)):
        ints[k] = [[x.numerator * (d // x.denominator) for x in row] for row in m]
    return ints, dens


def _int_matmul(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Exact integer products, in int64 when no overflow is possible."""
    bound_a = max((abs(int(x)) for x in a.flat), default=0)
    bound_b = max((abs(int(x)) for x in b.flat), default=0)
    if bound_a * bound_b * a.shape[-1] < 2**62:
        return np.matmul(a.astype(np.int64), b.astype(np.int64)).astype(object)
    return np.matmul(a, b)


_fraction = np.frompyfunc(Fraction, 2, 1)


def _rational_pair_products(a: np.ndarray, b: np.ndarray, span_only: bool) -> np.ndarray:
    ia, da = _scale_matrices(a)
    ib, db = _scale_matrices(b)
    num = _int_matmul(ia[:, None], ib[None, :])
    if span_only:
        # product (x, y) scaled by its own positive integer: spans are unchanged
        return num
    den = np.empty((len(a), len(b), 1, 1), dtype=object)
    for x, u in enumerate(da):
        for y, v in enumerate(db):
            den[x, y, 0, 0] = u * v
    return _fraction(num, den)


def pairwise_brackets(field: FieldSpec, a: np.ndarray, b: np.ndarray, span_only: bool = False) -> np.ndarray:
    """All commutators ``[a[i], b[j]]`` flattened like :func:`pairwise_products`.

    ``span_only`` is passed through; pair ``(i, j)`` gets the same scale in both
    orders, so the rows stay multiples of the true brackets.
    """
    ab = pairwise_products(field, a, b, span_only)
    if ab.shape[0] == 0:
        return ab
    n = a.shape[-1]
    ba = pairwise_products(field, b, a, span_only).reshape(len(b), len(a), n * n).transpose(1, 0, 2).reshape(-1, n * n)
    return field.reduce(ab - ba)


def product_space(a: Subspace, b: Subspace) -> Subspace:
    """Span of all products ``x y`` with ``x`` in ``a`` and ``y`` in ``b`` (matrix spaces)."""
    a._compatible(b)
    if a.is_zero() or b.is_zero():
        return Subspace.zero(a.field, a.ambient_dim)
    prods = pairwise_products(a.field, basis_tensor(a), basis_tensor(b), span_only=True)
    return Subspace.span(a.field, a.ambient_dim, prods)


def kernel_of_action(rows: Subspace, candidates: Subspace) -> Subspace:
    """Largest ``S`` inside ``candidates`` with ``w @ s = 0`` for all ``w`` in ``rows``."""
    n = rows.ambient_dim
    if candidates.ambient_dim != n * n:
        raise ShapeError(f"candidates must live in F^{n * n}")
    if rows.field != candidates.field:
        raise FieldError("mixed fields")
    field = rows.field
    if rows.is_zero() or candidates.is_zero():
        return candidates
    mats = basis_tensor(candidates)  # (k, n, n)
    # images[j] = (w_1 S_j, ..., w_r S_j) flattened
    images = field.reduce(np.einsum("ri,kij->krj", rows.basis, mats)) if field.uses_kernel else \
        field.reduce(np.matmul(rows.basis[None, :, :], mats))
    system = images.reshape(candidates.rank, -1).T
    coeffs = nullspace_array(field, system)
    if coeffs.shape[0] == 0:
        return Subspace.zero(field, n * n)
    return Subspace.span(field, n * n, field.matmul(coeffs, candidates.basis))


def module_product(w: Subspace, s: Subspace) -> Subspace:
    """Span of ``v @ a`` for ``v`` in ``w`` (row vectors) and ``a`` in ``s`` (matrices)."""
    n = w.ambient_dim
    if s.ambient_dim != n * n:
        raise ShapeError(f"matrix space must live in F^{n * n}")
    if w.field != s.field:
        raise FieldError("mixed fields")
    field = w.field
    if w.is_zero() or s.is_zero():
        return Subspace.zero(field, n)
    mats = basis_tensor(s)
    if field.uses_kernel:
        prods = np.einsum("ri,kij->krj", w.basis, mats) % field.p
    else:
        prods = field.reduce(np.matmul(w.basis[None, :, :], mats))
    return Subspace.span(field, n, prods.reshape(-1, n))
