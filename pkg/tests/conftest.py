from __future__ import annotations

import random

import pytest

from lienil.fields import FieldSpec
from lienil.linalg import Matrix

Q = FieldSpec.rational()
GF2 = FieldSpec.prime(2)
GF3 = FieldSpec.prime(3)
GF5 = FieldSpec.prime(5)
GF4 = FieldSpec.extension(2, 2)
GF9 = FieldSpec.extension(3, 2)

ALL_FIELDS = [Q, GF2, GF3, GF5, GF4]


def unit(field, n, i, j):
    """Matrix unit with 1-based indices, as written in the formulas."""
    return Matrix.unit(field, n, i - 1, j - 1)


def random_matrix(field, rows, cols, rng):
    return Matrix(field, [[field.random(rng) for _ in range(cols)] for _ in range(rows)])


def random_invertible(field, n, rng):
    while True:
        m = random_matrix(field, n, n, rng)
        if m.rank() == n:
            return m


@pytest.fixture
def rng():
    return random.Random(12345)
