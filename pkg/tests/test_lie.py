from __future__ import annotations

import itertools
import random

import numpy as np
import pytest

from lienil.algebra import close_generators, extend_scalars, full_matrix_algebra, radical_triangular, scalar_algebra
from lienil.extremal import type_algebra, upper_constant_diagonal
from lienil.fuzz import random_subalgebra
from lienil.lie import (
    bracket,
    derived_series,
    engel_check_bruteforce,
    expand_left_normed,
    left_normed,
    lie_nilpotence_index,
    lie_solvability_index,
    lower_central_series,
)
from lienil.linalg import Matrix, matrices_to_subspace, product_space

from conftest import GF2, GF4, GF5, Q, random_matrix, unit


def brute_index(r, limit=8):
    """Lie index from left-normed brackets of basis tuples (multilinearity)."""
    basis = r.basis()
    for m in range(1, limit + 1):
        if all(left_normed(list(t)).is_zero() for t in itertools.product(basis, repeat=m + 1)):
            return m
    return None


def test_bracket_examples():
    assert bracket(unit(Q, 3, 1, 2), unit(Q, 3, 2, 3)) == unit(Q, 3, 1, 3)
    a = unit(Q, 3, 2, 1)
    assert bracket(a, a).is_zero()
    assert bracket(Matrix.identity(Q, 3), a).is_zero()


def test_left_normed_examples():
    e12, e23 = unit(Q, 3, 1, 2), unit(Q, 3, 2, 3)
    assert left_normed([e12, e23, e23]).is_zero()
    assert left_normed([e12]) == e12
    assert left_normed([e12, e23]) == unit(Q, 3, 1, 3)
    with pytest.raises(ValueError):
        left_normed([])


def test_lower_central_series_of_u3():
    s = lower_central_series(upper_constant_diagonal(GF2, 3))
    assert [x.rank for x in s] == [4, 1, 0]
    assert s[1] == matrices_to_subspace(GF2, 3, [unit(GF2, 3, 1, 3)])


def test_series_of_commutative_and_scalar():
    assert lower_central_series(type_algebra(Q, (1, 1)))[1].is_zero()
    assert lower_central_series(scalar_algebra(Q, 3))[1].is_zero()


def test_nilpotence_index_examples():
    assert lie_nilpotence_index(upper_constant_diagonal(Q, 3)) == 2
    comm = close_generators(Q, 3, [unit(Q, 3, 1, 2)])
    assert lie_nilpotence_index(comm) == 1
    assert lie_nilpotence_index(full_matrix_algebra(Q, 2)) is None
    s = lower_central_series(full_matrix_algebra(Q, 2))
    assert s[-1].rank == 3 and s[-1] == s[-2]  # stabilizes at the trace-zero matrices


def test_solvability_examples():
    u3 = upper_constant_diagonal(GF5, 3)
    d = derived_series(u3)
    assert [x.rank for x in d] == [4, 1, 0]
    assert lie_solvability_index(u3) == 2
    assert lie_solvability_index(type_algebra(Q, (2, 3))) == 1
    assert lie_solvability_index(full_matrix_algebra(Q, 2)) is None


def test_index_against_bracket_oracle():
    rng = random.Random(17)
    for _ in range(12):
        r = random_subalgebra(GF2, 4, rng.randint(1, 2), rng)
        if r.dim > 6:
            continue
        assert lie_nilpotence_index(r) == brute_index(r)


def test_derived_inside_lower_central():
    rng = random.Random(5)
    for _ in range(20):
        r = random_subalgebra(GF5, 5, 2, rng)
        lcs, der = lower_central_series(r), derived_series(r)
        for k in range(min(len(lcs), len(der))):
            assert lcs[k].contains(der[k])
        assert lie_solvability_index(r) <= lie_nilpotence_index(r)


def test_radical_power_bounds_index():
    rng = random.Random(6)
    for _ in range(20):
        r = random_subalgebra(GF5, 5, 2, rng)
        j = radical_triangular(r)
        power, m = j, 1
        while not power.is_zero():
            power, m = product_space(power, j), m + 1
        # J^m = 0 with m minimal, so the Lie index is at most m - 1 (or 1)
        assert lie_nilpotence_index(r) <= max(1, m - 1)


def test_index_survives_scalar_extension():
    rng = random.Random(9)
    for _ in range(10):
        r = random_subalgebra(GF2, 4, 2, rng)
        assert lie_nilpotence_index(extend_scalars(r, GF4)) == lie_nilpotence_index(r)


def test_engel_examples():
    assert engel_check_bruteforce(upper_constant_diagonal(GF2, 2), 1)
    assert engel_check_bruteforce(upper_constant_diagonal(GF2, 3), 2)
    assert not engel_check_bruteforce(upper_constant_diagonal(GF2, 3), 1)
    assert not engel_check_bruteforce(full_matrix_algebra(GF2, 2), 3)
    with pytest.raises(ValueError):
        engel_check_bruteforce(full_matrix_algebra(GF2, 2), 0)


def test_expansion_small_cases():
    assert expand_left_normed(2).terms == {(1, 2): 1, (2, 1): -1}
    assert expand_left_normed(3).terms == {(1, 2, 3): 1, (2, 1, 3): -1, (3, 1, 2): -1, (3, 2, 1): 1}
    e5 = expand_left_normed(5)
    assert len(e5.terms) == 16
    assert [w for w in e5.terms if w[0] == 1] == [(1, 2, 3, 4, 5)]
    assert e5.coefficient((1, 2, 3, 4, 5)) == 1
    assert sum(1 for c in e5.full_table().values() if c == 0) == 120 - 16


@pytest.mark.parametrize("m", [1, 9])
def test_expansion_range(m):
    with pytest.raises(ValueError):
        expand_left_normed(m)


@pytest.mark.parametrize("m", range(2, 9))
def test_expansion_invariants(m):
    e = expand_left_normed(m)
    e.check_invariants()
    assert len(e.terms) == 2 ** (m - 1)


@pytest.mark.parametrize("field", [Q, GF5, GF4])
def test_expansion_evaluates_to_bracket(field):
    rng = random.Random(31)
    for m in range(2, 6):
        xs = [random_matrix(field, 3, 3, rng) for _ in range(m)]
        assert expand_left_normed(m).evaluate(xs) == left_normed(xs)
