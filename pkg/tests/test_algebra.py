from __future__ import annotations

import random

import numpy as np
import pytest

from lienil.algebra import (
    AlgebraError,
    MatrixAlgebra,
    NotSplitLocalError,
    NotTriangularError,
    PeirceRefusedError,
    TooLargeError,
    annihilator,
    block_diagonal_sum,
    center,
    close_generators,
    conjugate,
    corner_space,
    extend_scalars,
    full_matrix_algebra,
    idempotents,
    nilpotency_degree,
    peirce_decompose,
    radical_trace_form,
    radical_triangular,
    restrict_to_image,
    scalar_algebra,
    triangularize_local,
)
from lienil.extremal import type_algebra, upper_constant_diagonal
from lienil.fields import FieldError, FieldSpec
from lienil.fuzz import random_subalgebra
from lienil.lie import engel_check_bruteforce, lie_nilpotence_index
from lienil.linalg import Matrix, Subspace, matrices_to_subspace, module_product

from conftest import GF2, GF3, GF4, GF5, GF9, Q, random_invertible, unit


def mats(field, n, *pairs):
    return matrices_to_subspace(field, n, [unit(field, n, i, j) for i, j in pairs])


def test_close_single_unit():
    r = close_generators(Q, 2, [unit(Q, 2, 1, 2)])
    assert r.dim == 2
    assert r.carrier == matrices_to_subspace(Q, 2, [Matrix.identity(Q, 2), unit(Q, 2, 1, 2)])


def test_close_empty_is_scalars():
    assert close_generators(GF5, 4, []).dim == 1


def test_close_adds_products():
    r = close_generators(Q, 3, [unit(Q, 3, 1, 2), unit(Q, 3, 2, 3)])
    assert r.dim == 4
    assert r.contains(unit(Q, 3, 1, 3))


def test_close_full_matrix_algebra():
    r = close_generators(GF3, 2, [unit(GF3, 2, 1, 2), unit(GF3, 2, 2, 1)])
    assert r.dim == 4


def test_closure_is_a_fixpoint():
    rng = random.Random(4)
    for field in (GF2, GF5, Q):
        r = random_subalgebra(field, 4, 2, rng)
        again = close_generators(field, 4, r.basis())
        assert again.carrier == r.carrier


def test_constructor_checks_closure():
    with pytest.raises(AlgebraError):
        MatrixAlgebra(Q, 3, mats(Q, 3, (1, 2), (2, 3)), unital=False)
    with pytest.raises(AlgebraError):
        MatrixAlgebra(Q, 2, mats(Q, 2, (1, 2)), unital=True)


def test_radical_examples():
    u2 = upper_constant_diagonal(GF2, 2)
    assert radical_triangular(u2) == mats(GF2, 2, (1, 2))
    r = type_algebra(Q, (1, 1, 1))
    assert r.dim == 4 and radical_triangular(r).rank == 3
    assert radical_triangular(scalar_algebra(GF5, 3)).is_zero()


def test_radical_rejects_lower_entries():
    r = close_generators(Q, 2, [unit(Q, 2, 2, 1)])
    with pytest.raises(NotTriangularError):
        radical_triangular(r)


def test_radical_of_diagonal_algebra_is_zero():
    r = close_generators(GF3, 2, [unit(GF3, 2, 1, 1)])
    assert radical_triangular(r).is_zero()


def test_trace_form_radical_matches_triangular():
    rng = random.Random(8)
    for _ in range(5):
        r = random_subalgebra(Q, 4, 2, rng)
        assert radical_trace_form(r) == radical_triangular(r)
    with pytest.raises(FieldError):
        radical_trace_form(upper_constant_diagonal(GF2, 2))


def test_annihilator_examples():
    assert annihilator(mats(Q, 2, (1, 2)), Subspace.span(Q, 2, Q.array([[1, 0]]))).is_zero()
    i = mats(Q, 3, (1, 2), (1, 3), (2, 3))
    assert annihilator(i, Subspace.zero(Q, 3)) == i
    assert annihilator(i, Subspace.span(Q, 3, Q.array([[1, 0, 0]]))) == mats(Q, 3, (2, 3))


def test_module_product_examples():
    assert module_product(Subspace.full(Q, 2), mats(Q, 2, (1, 2))) == Subspace.span(Q, 2, Q.array([[0, 1]]))
    j = mats(Q, 3, (1, 2), (1, 3), (2, 3))
    assert module_product(Subspace.full(Q, 3), j) == Subspace.span(Q, 3, Q.array([[0, 1, 0], [0, 0, 1]]))
    assert module_product(Subspace.full(Q, 3), Subspace.zero(Q, 9)).is_zero()


def test_extend_scalars_examples():
    assert extend_scalars(upper_constant_diagonal(GF2, 2), GF4).dim == 2
    assert extend_scalars(scalar_algebra(GF3, 3), GF9).dim == 1
    r = type_algebra(GF2, (1, 2))
    assert r.dim == 3 and extend_scalars(r, GF4).dim == 3
    with pytest.raises(FieldError):
        extend_scalars(r, GF9)


def test_center_examples():
    assert center(full_matrix_algebra(Q, 2)) == matrices_to_subspace(Q, 2, [Matrix.identity(Q, 2)])
    comm = type_algebra(GF5, (1, 1))
    assert center(comm) == comm.carrier
    u3 = upper_constant_diagonal(GF2, 3)
    assert center(u3) == matrices_to_subspace(GF2, 3, [Matrix.identity(GF2, 3), unit(GF2, 3, 1, 3)])


def test_peirce_diagonal_pair():
    r = close_generators(GF2, 2, [unit(GF2, 2, 1, 1), unit(GF2, 2, 2, 2)], unital=False)
    assert r.dim == 2 and len(idempotents(r)) == 4
    factors = peirce_decompose(r)
    assert sorted(f.rank for f in factors) == [1, 1]
    assert all(f.corner.dim == 1 for f in factors)


def test_peirce_local_algebra():
    factors = peirce_decompose(upper_constant_diagonal(GF2, 2))
    assert len(factors) == 1
    assert factors[0].idempotent == Matrix.identity(GF2, 2) and factors[0].rank == 2


def test_peirce_block_sum_of_type_algebras():
    r = block_diagonal_sum([type_algebra(GF2, (1, 1)), type_algebra(GF2, (1, 1))])
    factors = peirce_decompose(r)
    assert [f.rank for f in factors] == [2, 2]
    assert all(f.corner.dim == 2 for f in factors)
    for f in factors:
        local = restrict_to_image(r, f.idempotent)
        assert local.n == 2 and local.dim == 2 and local.in_constant_diagonal_upper()


def test_peirce_refuses_noncentral_idempotents():
    with pytest.raises(PeirceRefusedError) as info:
        peirce_decompose(full_matrix_algebra(GF2, 2))
    assert info.value.noncentral


def test_peirce_size_limit():
    with pytest.raises(TooLargeError):
        peirce_decompose(upper_constant_diagonal(GF5, 5))  # 5^11 elements
    with pytest.raises(FieldError):
        peirce_decompose(upper_constant_diagonal(Q, 2))


def test_full_matrix_corner_dimension():
    for n in (2, 3):
        full = full_matrix_algebra(GF2, n)
        for e in idempotents(full):
            assert corner_space(full.carrier, e).rank == e.rank() ** 2


@pytest.mark.parametrize("field", [GF2, GF3])
def test_engel_algebras_have_central_idempotents(field):
    rng = random.Random(21)
    algebras = [
        block_diagonal_sum([type_algebra(field, (1, 1)), scalar_algebra(field, 1)]),
        block_diagonal_sum([type_algebra(field, (1, 2)), type_algebra(field, (1, 1))]),
        close_generators(field, 3, [unit(field, 3, 1, 1), unit(field, 3, 1, 2)]),  # not Engel
    ]
    algebras += [random_subalgebra(field, 3, 1, rng) for _ in range(3)]
    seen_engel = 0
    for r in algebras:
        if r.field.p ** r.dim > 10**5:
            continue
        z = center(r)
        engel = any(engel_check_bruteforce(r, m) for m in (1, 2, 3))
        if engel:
            seen_engel += 1
            assert all(z.contains_vector(e.flatten()) for e in idempotents(r))
        for f_ in (peirce_decompose(r),) if engel else ():
            assert sum(f.rank for f in f_) == r.n
            assert all(f.corner.dim <= f.rank**2 for f in f_)
    assert seen_engel >= 4


def test_triangularize_transposed_unit():
    r = close_generators(Q, 2, [unit(Q, 2, 2, 1)])
    u = triangularize_local(r)
    assert u == Matrix(Q, [[0, 1], [1, 0]])
    assert conjugate(r, u).carrier == matrices_to_subspace(Q, 2, [Matrix.identity(Q, 2), unit(Q, 2, 1, 2)])


def test_triangularize_already_triangular():
    r = upper_constant_diagonal(GF5, 3)
    u = triangularize_local(r)
    assert u == Matrix.identity(GF5, 3)


def test_triangularize_random_conjugates():
    rng = random.Random(7)
    for n in (2, 3, 4):
        r = upper_constant_diagonal(GF5, n)
        p = random_invertible(GF5, n, rng)
        c = conjugate(r, p)
        u = triangularize_local(c)
        assert conjugate(c, u).in_constant_diagonal_upper()


def test_triangularize_char_divides_n():
    # n = 2 over GF(2): eigenvalues found by search, not by trace / n
    r = close_generators(GF2, 2, [Matrix(GF2, [[1, 1], [0, 1]])])
    p = Matrix(GF2, [[1, 0], [1, 1]])
    c = conjugate(r, p)
    assert conjugate(c, triangularize_local(c)).in_constant_diagonal_upper()


def test_triangularize_rejects_nonlocal_inputs():
    with pytest.raises(NotSplitLocalError):
        triangularize_local(close_generators(Q, 2, [unit(Q, 2, 1, 1)]))
    with pytest.raises(NotSplitLocalError):
        # rotation by 90 degrees has no eigenvalue over Q
        triangularize_local(close_generators(Q, 2, [Matrix(Q, [[0, -1], [1, 0]])]))
    with pytest.raises(NotSplitLocalError):
        triangularize_local(close_generators(Q, 2, [unit(Q, 2, 1, 2)], unital=False))


def test_conjugation_round_trip_and_invariants():
    rng = random.Random(11)
    for _ in range(100):
        field = rng.choice([GF2, GF5, Q])
        n = rng.randint(2, 4)
        r = random_subalgebra(field, n, rng.randint(0, 2), rng)
        u = random_invertible(field, n, rng)
        c = conjugate(r, u)
        assert c.dim == r.dim and c.is_closed()
        assert conjugate(c, u.inverse()).carrier == r.carrier
    r = upper_constant_diagonal(Q, 3)
    assert conjugate(r, Matrix.identity(Q, 3)) == r


def test_conjugation_preserves_index_and_radical():
    rng = random.Random(2)
    for _ in range(10):
        r = random_subalgebra(GF5, 4, 2, rng)
        u = random_invertible(GF5, 4, rng)
        c = conjugate(r, u)
        assert lie_nilpotence_index(c) == lie_nilpotence_index(r)
        t = conjugate(c, triangularize_local(c))
        assert radical_triangular(t).rank == radical_triangular(r).rank


def test_conjugate_singular_rejected():
    with pytest.raises(ZeroDivisionError):
        conjugate(upper_constant_diagonal(Q, 2), Matrix(Q, [[1, 1], [1, 1]]))


def test_nilpotency_degree():
    assert nilpotency_degree(radical_triangular(upper_constant_diagonal(Q, 4))) == 4
    assert nilpotency_degree(Subspace.zero(Q, 4)) == 1
    with pytest.raises(AlgebraError):
        nilpotency_degree(matrices_to_subspace(Q, 2, [Matrix.identity(Q, 2)]))
