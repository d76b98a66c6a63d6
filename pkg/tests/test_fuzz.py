from __future__ import annotations

import random

from lienil.fields import FieldSpec
from lienil.fuzz import fuzz, random_strict_upper, random_subalgebra, run_trial

from conftest import GF3, GF5


def test_random_generators_are_strictly_upper():
    rng = random.Random(0)
    for _ in range(20):
        m = random_strict_upper(GF5, 5, rng)
        assert m.is_upper_triangular()
        assert all(m.data[i, i] == 0 for i in range(5))


def test_random_subalgebras_live_in_the_cone():
    rng = random.Random(1)
    for _ in range(20):
        r = random_subalgebra(GF3, 5, 2, rng)
        assert r.in_constant_diagonal_upper() and r.is_closed() and r.unital


def test_trials_are_reproducible():
    a = run_trial(GF5, 5, 2, seed=10, index=3)
    b = run_trial(GF5, 5, 2, seed=10, index=3)
    assert (a.dimension, a.lie_index, a.chain_length) == (b.dimension, b.lie_index, b.chain_length)


def test_summary_is_order_independent():
    s = fuzz(4, FieldSpec.prime(7), 25, seed=2)
    assert not s.violations
    assert sum(s.dimension_hist.values()) == 25
    assert s.to_json() == fuzz(4, FieldSpec.prime(7), 25, seed=2).to_json()


def test_parallel_matches_serial():
    serial = fuzz(3, GF3, 12, seed=4)
    parallel = fuzz(3, GF3, 12, seed=4, jobs=2)
    assert serial.to_json() == parallel.to_json()
