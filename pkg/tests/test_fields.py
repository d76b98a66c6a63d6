from __future__ import annotations

import itertools
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lienil.fields import FieldError, FieldSpec, Scalar, embed_scalar, field_arith, is_irreducible

from conftest import GF2, GF3, GF4, GF5, GF9, Q


def s(field, text):
    return Scalar.parse(field, text)


def test_prime_field_addition():
    assert field_arith(s(GF5, "3"), s(GF5, "4"), "add") == s(GF5, "2")


def test_rational_addition():
    assert field_arith(s(Q, "1/2"), s(Q, "1/3"), "add") == s(Q, "5/6")


def test_gf4_square_of_generator():
    x = s(GF4, "[0,1]")
    assert str(field_arith(x, x, "mul")) == "[1,1]"


def test_all_ops_dispatch():
    a, b = s(GF5, "2"), s(GF5, "3")
    assert str(field_arith(a, b, "sub")) == "4"
    assert str(field_arith(a, b, "div")) == "4"  # 2 * 3^-1 = 2 * 2
    assert str(field_arith(a, None, "neg")) == "3"
    assert str(field_arith(a, None, "inv")) == "3"
    with pytest.raises(ValueError):
        field_arith(a, b, "pow")


def test_division_by_zero_is_an_error():
    with pytest.raises(ZeroDivisionError):
        field_arith(s(Q, "1"), s(Q, "0"), "div")
    with pytest.raises(ZeroDivisionError):
        field_arith(s(GF4, "[0,0]"), None, "inv")


def test_mixed_fields_rejected():
    with pytest.raises(FieldError):
        field_arith(s(GF5, "1"), s(GF3, "1"), "add")


def test_canonical_forms():
    assert s(Q, "2/4") == s(Q, "1/2")
    assert str(s(Q, "-6/3")) == "-2"
    assert str(s(GF5, "-1")) == "4"
    assert str(s(GF4, "[1]")) == "[1,0]"
    v = s(Q, "-3/9").value
    assert v.denominator > 0 and v == Fraction(-1, 3)


@pytest.mark.parametrize("text", ["1/0", "1/-2", "x", "1.5", ""])
def test_bad_rational_text(text):
    with pytest.raises(FieldError):
        Scalar.parse(Q, text)


def test_field_validation():
    with pytest.raises(FieldError):
        FieldSpec.prime(9)
    with pytest.raises(FieldError):
        FieldSpec.extension(2, 2, [1, 0, 1])  # x^2 + 1 = (x + 1)^2 over GF(2)
    with pytest.raises(FieldError):
        FieldSpec.extension(2, 2, [1, 1, 2])  # not monic mod 2
    with pytest.raises(FieldError):
        FieldSpec.extension(7, 3)  # no default modulus
    assert FieldSpec.extension(2, 2) == FieldSpec.extension(2, 2, [1, 1, 1])


def test_default_moduli_are_irreducible():
    for p in (2, 3, 5):
        for k in (1, 2, 3):
            f = FieldSpec.extension(p, k)
            assert is_irreducible(f.modulus, p)
            assert len(set(f.elements())) == p**k


def test_irreducibility_against_root_free_degree_four():
    # x^4 + x + 1 is irreducible over GF(2); x^4 + x^2 + 1 = (x^2 + x + 1)^2 is not
    assert is_irreducible((1, 1, 0, 0, 1), 2)
    assert not is_irreducible((1, 0, 1, 0, 1), 2)


@pytest.mark.parametrize("text,label", [("q", "Q"), ("gf5", "GF(5)"), ("GF2^2", "GF(2^2)")])
def test_parse_field_labels(text, label):
    assert FieldSpec.parse(text).label == label


def test_field_json_round_trip():
    for f in (Q, GF5, GF4, GF9):
        assert FieldSpec.from_json(f.to_json()) == f


def test_embed_examples():
    assert str(embed_scalar(s(GF2, "1"), GF4)) == "[1,0]"
    assert embed_scalar(s(GF2, "0"), GF4).is_zero()
    assert str(embed_scalar(s(GF3, "2"), GF9)) == "[2,0]"
    with pytest.raises(FieldError):
        embed_scalar(s(GF3, "1"), GF4)


@pytest.mark.parametrize("p,k", [(2, 2), (2, 3), (3, 2), (5, 2), (7, 1)])
def test_embedding_is_a_ring_homomorphism(p, k):
    src = FieldSpec.prime(p)
    tgt = FieldSpec.extension(p, k) if (p, k) != (7, 1) else FieldSpec.extension(7, 1, [3, 1])
    for a, b in itertools.product(range(p), repeat=2):
        x, y = Scalar(src, a), Scalar(src, b)
        assert embed_scalar(x + y, tgt) == embed_scalar(x, tgt) + embed_scalar(y, tgt)
        assert embed_scalar(x * y, tgt) == embed_scalar(x, tgt) * embed_scalar(y, tgt)


FIELDS = [Q, GF2, GF5, GF4, GF9, FieldSpec.prime(101)]


@settings(max_examples=60, deadline=None)
@given(st.sampled_from(FIELDS), st.integers(0, 2**32))
def test_field_axioms(field, seed):
    rng = random.Random(seed)
    a, b, c = (Scalar(field, field.random(rng)) for _ in range(3))
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a + b == b + a and a * b == b * a
    assert a * (b + c) == a * b + a * c
    assert a - a == Scalar(field, field.zero)
    if not a.is_zero():
        assert a.inverse().inverse() == a
        assert a * a.inverse() == Scalar(field, field.one)


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(FIELDS), st.integers(0, 2**32))
def test_text_form_round_trip(field, seed):
    x = Scalar(field, field.random(random.Random(seed)))
    assert Scalar.parse(field, str(x)) == x
