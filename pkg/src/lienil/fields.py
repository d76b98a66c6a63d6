"""Exact scalar fields: the rationals, prime fields GF(p) and extensions GF(p^k).

A :class:`FieldSpec` describes a field and knows how to do arithmetic on
*raw* element values, which is what the matrix code stores:

* rational  -> :class:`fractions.Fraction`
* prime     -> ``int`` in ``[0, p)``
* extension -> :class:`ExtElement` (coefficient tuple, ascending powers)

:class:`Scalar` is the user-facing wrapper pairing a field with a canonical
value; it supports the usual operators and the text form used in JSON files.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from functools import lru_cache
from itertools import product
from typing import Any, Iterator

import numpy as np

RATIONAL = "rational"
PRIME = "prime"
EXTENSION = "extension"

# Conway polynomials, ascending coefficients.
DEFAULT_MODULI: dict[tuple[int, int], tuple[int, ...]] = {
    (2, 1): (1, 1),
    (2, 2): (1, 1, 1),
    (2, 3): (1, 1, 0, 1),
    (3, 1): (1, 1),
    (3, 2): (2, 2, 1),
    (3, 3): (1, 2, 0, 1),
    (5, 1): (3, 1),
    (5, 2): (2, 4, 1),
    (5, 3): (3, 3, 0, 1),
}

# int64 products of reduced residues stay exact below this bound even after
# summing a few thousand of them.
_KERNEL_PRIME_LIMIT = 1 << 26


class FieldError(ValueError):
    """Invalid field description or mixed-field arithmetic."""


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    if p % 2 == 0:
        return p == 2
    for d in range(3, math.isqrt(p) + 1, 2):
        if p % d == 0:
            return False
    return True


# --- polynomials over GF(p), ascending coefficient tuples -----------------

def _trim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _poly_sub(a, b, p):
    n = max(len(a), len(b))
    out = [((a[i] if i < len(a) else 0) - (b[i] if i < len(b) else 0)) % p for i in range(n)]
    return _trim(out)


def _poly_mul(a, b, p):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] = (out[i + j] + x * y) % p
    return _trim(out)


def _poly_divmod(a, b, p):
    a = _trim(list(a))
    b = _trim(list(b))
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    inv_lead = pow(b[-1], -1, p)
    q = [0] * max(len(a) - len(b) + 1, 0)
    while len(a) >= len(b) and a:
        shift = len(a) - len(b)
        f = (a[-1] * inv_lead) % p
        q[shift] = f
        for i, y in enumerate(b):
            a[i + shift] = (a[i + shift] - f * y) % p
        _trim(a)
    return _trim(q), a


def _poly_gcd(a, b, p):
    a, b = _trim(list(a)), _trim(list(b))
    while b:
        a, b = b, _poly_divmod(a, b, p)[1]
    return a


def _poly_powmod(base, e, mod, p):
    result = [1]
    base = _poly_divmod(base, mod, p)[1]
    while e:
        if e & 1:
            result = _poly_divmod(_poly_mul(result, base, p), mod, p)[1]
        base = _poly_divmod(_poly_mul(base, base, p), mod, p)[1]
        e >>= 1
    return result


def _prime_factors(n: int) -> list[int]:
    out, d = [], 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def is_irreducible(modulus: tuple[int, ...], p: int) -> bool:
    """Rabin's irreducibility test for a monic polynomial over GF(p)."""
    f = _trim([c % p for c in modulus])
    d = len(f) - 1
    if d < 1 or f[-1] != 1:
        return False
    if d == 1:
        return True
    if d <= 3:
        # a cubic or quadratic is irreducible iff it has no root
        return all(
            sum(c * pow(x, i, p) for i, c in enumerate(f)) % p != 0 for x in range(p)
        )
    x = [0, 1]
    if _poly_sub(_poly_powmod(x, p**d, f, p), x, p):
        return False
    for q in _prime_factors(d):
        h = _poly_sub(_poly_powmod(x, p ** (d // q), f, p), x, p)
        if len(_poly_gcd(f, h, p)) != 1:
            return False
    return True


@lru_cache(maxsize=1 << 16)
def _ext_mul(a: tuple[int, ...], b: tuple[int, ...], modulus: tuple[int, ...], p: int):
    r = _poly_divmod(_poly_mul(list(a), list(b), p), modulus, p)[1]
    return tuple(r + [0] * (len(modulus) - 1 - len(r)))


@lru_cache(maxsize=1 << 14)
def _ext_inv(a: tuple[int, ...], modulus: tuple[int, ...], p: int):
    # extended Euclid in GF(p)[x]
    r0, r1 = list(modulus), _trim(list(a))
    s0, s1 = [], [1]
    while r1:
        q, r = _poly_divmod(r0, r1, p)
        r0, r1 = r1, r
        s0, s1 = s1, _poly_sub(s0, _poly_mul(q, s1, p), p)
    inv_c = pow(r0[0], -1, p)
    s = [(c * inv_c) % p for c in s0]
    s = _poly_divmod(s, modulus, p)[1]
    return tuple(s + [0] * (len(modulus) - 1 - len(s)))


class ExtElement:
    """Raw element of GF(p^k): coefficient tuple modulo the defining polynomial."""

    __slots__ = ("spec", "c")

    def __init__(self, spec: FieldSpec, c: tuple[int, ...]):
        self.spec = spec
        self.c = c

    def _coerce(self, other):
        if isinstance(other, ExtElement):
            if other.spec != self.spec:
                raise FieldError("mixed-field operands")
            return other.c
        if isinstance(other, (int, np.integer)):
            return self.spec.from_int(int(other)).c
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        p = self.spec.p
        return ExtElement(self.spec, tuple((x + y) % p for x, y in zip(self.c, o)))

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        p = self.spec.p
        return ExtElement(self.spec, tuple((x - y) % p for x, y in zip(self.c, o)))

    def __rsub__(self, other):
        return (-self) + other

    def __neg__(self):
        p = self.spec.p
        return ExtElement(self.spec, tuple((-x) % p for x in self.c))

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return ExtElement(self.spec, _ext_mul(self.c, o, self.spec.modulus, self.spec.p))

    __rmul__ = __mul__

    def inverse(self) -> ExtElement:
        if not any(self.c):
            raise ZeroDivisionError("inverse of zero in " + self.spec.label)
        return ExtElement(self.spec, _ext_inv(self.c, self.spec.modulus, self.spec.p))

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self * ExtElement(self.spec, o).inverse()

    def __bool__(self):
        return any(self.c)

    def __eq__(self, other):
        if isinstance(other, ExtElement):
            return self.spec == other.spec and self.c == other.c
        if isinstance(other, (int, np.integer)):
            return self.c == self.spec.from_int(int(other)).c
        return NotImplemented

    def __hash__(self):
        return hash(self.c)

    def __repr__(self):
        return "[" + ",".join(map(str, self.c)) + "]"


@dataclass(frozen=True)
class FieldSpec:
    """An exact field. Build with :meth:`rational`, :meth:`prime`, :meth:`extension`."""

    kind: str
    p: int | None = None
    degree: int | None = None
    modulus: tuple[int, ...] | None = dc_field(default=None)

    def __post_init__(self):
        if self.kind == RATIONAL:
            if self.p is not None or self.degree is not None or self.modulus is not None:
                raise FieldError("the rational field takes no parameters")
        elif self.kind == PRIME:
            if not isinstance(self.p, int) or not is_prime(self.p):
                raise FieldError(f"{self.p!r} is not prime")
            if self.degree is not None or self.modulus is not None:
                raise FieldError("a prime field takes no degree or modulus")
        elif self.kind == EXTENSION:
            if not isinstance(self.p, int) or not is_prime(self.p):
                raise FieldError(f"{self.p!r} is not prime")
            if not isinstance(self.degree, int) or self.degree < 1:
                raise FieldError("extension degree must be a positive integer")
            if self.modulus is None:
                raise FieldError("extension field needs a modulus")
            mod = tuple(int(c) % self.p for c in self.modulus)
            object.__setattr__(self, "modulus", mod)
            if len(mod) != self.degree + 1 or mod[-1] != 1:
                raise FieldError(f"modulus must be monic of degree {self.degree}")
            if not is_irreducible(mod, self.p):
                raise FieldError(f"modulus {list(mod)} is reducible over GF({self.p})")
        else:
            raise FieldError(f"unknown field kind {self.kind!r}")

    # construction ---------------------------------------------------------

    @classmethod
    def rational(cls) -> FieldSpec:
        return cls(RATIONAL)

    @classmethod
    def prime(cls, p: int) -> FieldSpec:
        return cls(PRIME, p=p)

    @classmethod
    def extension(cls, p: int, degree: int, modulus=None) -> FieldSpec:
        if modulus is None:
            try:
                modulus = DEFAULT_MODULI[(p, degree)]
            except KeyError:
                raise FieldError(f"no default modulus for GF({p}^{degree}); supply one") from None
        return cls(EXTENSION, p=p, degree=degree, modulus=tuple(modulus))

    @classmethod
    def parse(cls, text: str) -> FieldSpec:
        """Parse ``q``, ``gfP`` or ``gfP^K`` (case-insensitive)."""
        t = text.strip().lower()
        if t in ("q", "qq", "rational"):
            return cls.rational()
        m = re.fullmatch(r"gf\(?(\d+)(?:\^(\d+))?\)?", t)
        if not m:
            raise FieldError(f"cannot parse field {text!r}")
        p = int(m.group(1))
        if m.group(2) is None:
            return cls.prime(p)
        return cls.extension(p, int(m.group(2)))

    @classmethod
    def from_json(cls, obj: Any) -> FieldSpec:
        if not isinstance(obj, dict) or "kind" not in obj:
            raise FieldError("field descriptor must be an object with a 'kind'")
        kind = obj["kind"]
        if kind == RATIONAL:
            return cls.rational()
        if kind == PRIME:
            return cls.prime(obj.get("p"))
        if kind == EXTENSION:
            return cls.extension(obj.get("p"), obj.get("degree"), obj.get("modulus"))
        raise FieldError(f"unknown field kind {kind!r}")

    def to_json(self) -> dict:
        if self.kind == RATIONAL:
            return {"kind": RATIONAL}
        if self.kind == PRIME:
            return {"kind": PRIME, "p": self.p}
        return {"kind": EXTENSION, "p": self.p, "degree": self.degree, "modulus": list(self.modulus)}

    @property
    def label(self) -> str:
        if self.kind == RATIONAL:
            return "Q"
        if self.kind == PRIME:
            return f"GF({self.p})"
        return f"GF({self.p}^{self.degree})"

    def __repr__(self):
        return f"FieldSpec<{self.label}>"

    @property
    def characteristic(self) -> int:
        return 0 if self.kind == RATIONAL else self.p

    @property
    def order(self) -> int | None:
        if self.kind == RATIONAL:
            return None
        return self.p if self.kind == PRIME else self.p**self.degree

    @property
    def uses_kernel(self) -> bool:
        """True when matrices live in int64 arrays reduced by the GF(p) kernel."""
        return self.kind == PRIME and self.p < _KERNEL_PRIME_LIMIT

    @property
    def dtype(self):
        return np.int64 if self.uses_kernel else object

    # raw arithmetic -------------------------------------------------------

    @property
    def zero(self):
        if self.kind == RATIONAL:
            return Fraction(0)
        if self.kind == PRIME:
            return 0
        return ExtElement(self, (0,) * self.degree)

    @property
    def one(self):
        return self.from_int(1)

    def from_int(self, k: int):
        if self.kind == RATIONAL:
            return Fraction(k)
        if self.kind == PRIME:
            return k % self.p
        return ExtElement(self, (k % self.p,) + (0,) * (self.degree - 1))

    def add(self, a, b):
        return (a + b) % self.p if self.kind == PRIME else a + b

    def sub(self, a, b):
        return (a - b) % self.p if self.kind == PRIME else a - b

    def mul(self, a, b):
        return (a * b) % self.p if self.kind == PRIME else a * b

    def neg(self, a):
        return (-a) % self.p if self.kind == PRIME else -a

    def inv(self, a):
        if self.is_zero(a):
            raise ZeroDivisionError(f"inverse of zero in {self.label}")
        if self.kind == PRIME:
            return pow(int(a), -1, self.p)
        if self.kind == RATIONAL:
            return 1 / a
        return a.inverse()

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def is_zero(self, a) -> bool:
        return not a

    def normalize(self, x):
        """Coerce an int / Fraction / raw value into this field's raw form."""
        if self.kind == RATIONAL:
            return Fraction(x)
        if self.kind == PRIME:
            if isinstance(x, Fraction):
                return (x.numerator * pow(x.denominator, -1, self.p)) % self.p
            return int(x) % self.p
        if isinstance(x, ExtElement):
            if x.spec != self:
                raise FieldError("mixed-field operands")
            return x
        if isinstance(x, (tuple, list)):
            return self.from_coeffs(x)
        return self.from_int(int(x))

    def from_coeffs(self, coeffs) -> ExtElement:
        c = [int(v) % self.p for v in coeffs]
        if len(c) > self.degree:
            c = _poly_divmod(c, self.modulus, self.p)[1]
        return ExtElement(self, tuple(c + [0] * (self.degree - len(c))))

    def elements(self) -> Iterator:
        """All raw elements of a finite field, in a fixed order (zero first)."""
        if self.kind == RATIONAL:
            raise FieldError("the rational field is infinite")
        if self.kind == PRIME:
            yield from range(self.p)
            return
        for digits in product(range(self.p), repeat=self.degree):
            yield ExtElement(self, tuple(reversed(digits)))

    def random(self, rng):
        """A uniformly random element of a finite field (small ints for Q)."""
        if self.kind == RATIONAL:
            return Fraction(rng.randint(-3, 3))
        if self.kind == PRIME:
            return rng.randrange(self.p)
        return ExtElement(self, tuple(rng.randrange(self.p) for _ in range(self.degree)))

    # text form ------------------------------------------------------------

    def parse_raw(self, text):
        if isinstance(text, (int, np.integer)) and not isinstance(text, bool):
            return self.from_int(int(text))
        if not isinstance(text, str):
            raise FieldError(f"scalar must be a string, got {text!r}")
        t = text.strip()
        if self.kind == EXTENSION:
            m = re.fullmatch(r"\[\s*(-?\d+(?:\s*,\s*-?\d+)*)?\s*\]", t)
            if m:
                coeffs = [int(v) for v in m.group(1).split(",")] if m.group(1) else []
                return self.from_coeffs(coeffs)
            if re.fullmatch(r"-?\d+", t):
                return self.from_int(int(t))
            raise FieldError(f"cannot parse {text!r} as an element of {self.label}")
        if self.kind == PRIME:
            if not re.fullmatch(r"-?\d+", t):
                raise FieldError(f"cannot parse {text!r} as an element of {self.label}")
            return int(t) % self.p
        if not re.fullmatch(r"-?\d+(\s*/\s*\d+)?", t):
            raise FieldError(f"cannot parse {text!r} as a rational")
        try:
            return Fraction(t.replace(" ", ""))
        except ZeroDivisionError:
            raise FieldError(f"zero denominator in {text!r}") from None

    def format_raw(self, x) -> str:
        if self.kind == EXTENSION:
            return "[" + ",".join(str(v) for v in x.c) + "]"
        if self.kind == PRIME:
            return str(int(x) % self.p)
        x = Fraction(x)
        return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"

    # arrays ---------------------------------------------------------------

    def array(self, data) -> np.ndarray:
        """Coerce nested data into a reduced array of raw values."""
        if self.uses_kernel:
            a = np.asarray(data)
            if a.dtype == object:
                a = np.vectorize(self.normalize, otypes=[object])(a)
            return np.asarray(a, dtype=np.int64) % self.p
        a = np.asarray(data, dtype=object)
        out = np.empty(a.shape, dtype=object)
        for idx, v in np.ndenumerate(a):
            out[idx] = self.normalize(v)
        return out

    def zeros(self, shape) -> np.ndarray:
        if self.uses_kernel:
            return np.zeros(shape, dtype=np.int64)
        out = np.empty(shape, dtype=object)
        out.fill(self.zero)
        return out

    def eye(self, n: int) -> np.ndarray:
        out = self.zeros((n, n))
        for i in range(n):
            out[i, i] = self.one
        return out

    def reduce(self, a: np.ndarray) -> np.ndarray:
        if self.kind == PRIME:
            return a % self.p
        return a

    def matmul(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        if self.kind == RATIONAL and a.size and b.size:
            return _rational_matmul(a, b)
        return self.reduce(np.matmul(a, b))

    def scalar(self, raw) -> Scalar:
        return Scalar(self, self.normalize(raw))


def _common_scale(a: np.ndarray):
    den = math.lcm(*(Fraction(x).denominator for x in a.flat))
    ints = np.empty(a.shape, dtype=object)
    for idx, x in np.ndenumerate(a):
        x = Fraction(x)
        ints[idx] = x.numerator * (den // x.denominator)
    return ints, den


_to_fraction = np.frompyfunc(Fraction, 2, 1)


def _rational_matmul(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Exact rational product computed on integer numerators."""
    ia, da = _common_scale(a)
    ib, db = _common_scale(b)
    big = max(abs(x) for x in ia.flat) * max(abs(x) for x in ib.flat) * a.shape[-1]
    if big < 2**62:
        num = np.matmul(ia.astype(np.int64), ib.astype(np.int64)).astype(object)
    else:
        num = np.matmul(ia, ib)
    return _to_fraction(num, da * db)


# --- user-facing scalars ---------------------------------------------------

@dataclass(frozen=True)
class Scalar:
    """An exact field element in canonical form.

    Canonical values: reduced :class:`Fraction` (positive denominator) for Q,
    a residue in ``[0, p)`` for GF(p), an :class:`ExtElement` for GF(p^k).
    """

    field: FieldSpec
    value: Any

    def __post_init__(self):
        object.__setattr__(self, "value", self.field.normalize(self.value))

    @classmethod
    def parse(cls, field: FieldSpec, text) -> Scalar:
        return cls(field, field.parse_raw(text))

    def _check(self, other: Scalar) -> None:
        if not isinstance(other, Scalar):
            raise TypeError("expected a Scalar")
        if other.field != self.field:
            raise FieldError(f"mixed-field operands: {self.field.label} and {other.field.label}")

    def __add__(self, other):
        self._check(other)
        return Scalar(self.field, self.field.add(self.value, other.value))

    def __sub__(self, other):
        self._check(other)
        return Scalar(self.field, self.field.sub(self.value, other.value))

    def __mul__(self, other):
        self._check(other)
        return Scalar(self.field, self.field.mul(self.value, other.value))

    def __truediv__(self, other):
        self._check(other)
        return Scalar(self.field, self.field.div(self.value, other.value))

    def __neg__(self):
        return Scalar(self.field, self.field.neg(self.value))

    def inverse(self) -> Scalar:
        return Scalar(self.field, self.field.inv(self.value))

    def is_zero(self) -> bool:
        return self.field.is_zero(self.value)

    def __str__(self):
        return self.field.format_raw(self.value)

    def __repr__(self):
        return f"Scalar({self.field.label}, {self})"


def field_arith(a: Scalar, b: Scalar | None, op: str) -> Scalar:
    """Apply ``op`` in {add, sub, mul, div, neg, inv}; unary ops ignore ``b``."""
    if op == "neg":
        return -a
    if op == "inv":
        return a.inverse()
    ops = {"add": Scalar.__add__, "sub": Scalar.__sub__, "mul": Scalar.__mul__, "div": Scalar.__truediv__}
    if op not in ops:
        raise ValueError(f"unknown operation {op!r}")
    return ops[op](a, b)


def embed_scalar(a: Scalar, target: FieldSpec) -> Scalar:
    """Image of a GF(p) element in GF(p^k) as a constant polynomial."""
    if a.field.kind != PRIME:
        raise FieldError("only prime-field scalars can be embedded")
    if target.kind != EXTENSION or target.p != a.field.p:
        raise FieldError(
            f"characteristic mismatch: {a.field.label} does not embed in {target.label}"
        )
    return Scalar(target, target.from_int(a.value))


def embed_raw(source: FieldSpec, target: FieldSpec, x):
    """Raw-value version of :func:`embed_scalar` (prime -> extension)."""
    if source.kind != PRIME or target.kind != EXTENSION or source.p != target.p:
        raise FieldError(f"characteristic mismatch: {source.label} -> {target.label}")
    return target.from_int(int(x))
