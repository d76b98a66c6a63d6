"""Random closed subalgebras of the upper triangular constant-diagonal matrices,
checked against every bound from :func:`lienil.chain.bound_check`."""

from __future__ import annotations

import random
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field as dc_field

import numpy as np

from lienil.algebra import MatrixAlgebra, close_generators
from lienil.chain import bound_check
from lienil.fields import FieldSpec
from lienil.io import AlgebraDocument
from lienil.linalg import Matrix

FUZZ_PRIMES = (2, 3, 5, 7)
FUZZ_MAX_N = 8


def random_strict_upper(field: FieldSpec, n: int, rng: random.Random) -> Matrix:
    """Strictly upper triangular matrix with independent uniform entries."""
    data = field.zeros((n, n))
    for i in range(n):
        for j in range(i + 1, n):
            data[i, j] = field.random(rng)
    return Matrix.wrap(field, data)


def random_subalgebra(field: FieldSpec, n: int, density: int, rng: random.Random) -> MatrixAlgebra:
    """Closure of ``I`` and ``density`` random strictly upper triangular matrices."""
    gens = [random_strict_upper(field, n, rng) for _ in range(density)]
    return close_generators(field, n, gens, unital=True)


@dataclass
class TrialResult:
    index: int
    dimension: int
    lie_index: int
    chain_length: int
    violations: list
    document: dict | None = None


def run_trial(field: FieldSpec, n: int, density: int, seed: int, index: int) -> TrialResult:
    rng = random.Random(seed + index)
    r = random_subalgebra(field, n, density, rng)
    rep = bound_check(r)
    bad = rep.violations()
    doc = AlgebraDocument.from_algebra(r, label=f"fuzz seed={seed} trial={index}").to_obj() if bad else None
    return TrialResult(index, r.dim, rep.lie_index, rep.chain_length, bad, doc)


def _run_range(args) -> list[TrialResult]:
    field_json, n, density, seed, indices = args
    field = FieldSpec.from_json(field_json)
    return [run_trial(field, n, density, seed, i) for i in indices]


@dataclass
class FuzzSummary:
    n: int
    field: str
    trials: int
    seed: int
    density: int
    dimension_hist: Counter = dc_field(default_factory=Counter)
    lie_index_hist: Counter = dc_field(default_factory=Counter)
    chain_length_hist: Counter = dc_field(default_factory=Counter)
    violations: list = dc_field(default_factory=list)

    def add(self, t: TrialResult) -> None:
        self.dimension_hist[t.dimension] += 1
        self.lie_index_hist[t.lie_index] += 1
        self.chain_length_hist[t.chain_length] += 1
        if t.violations:
            self.violations.append(t)

    def to_json(self) -> dict:
        def hist(c: Counter):
            return {str(k): c[k] for k in sorted(c)}

        return {
            "n": self.n,
            "field": self.field,
            "trials": self.trials,
            "seed": self.seed,
            "density": self.density,
            "dimension_hist": hist(self.dimension_hist),
            "lie_index_hist": hist(self.lie_index_hist),
            "chain_length_hist": hist(self.chain_length_hist),
            "violation_count": len(self.violations),
            "violations": [
                {"trial": t.index, "failed": t.violations, "document": t.document}
                for t in sorted(self.violations, key=lambda t: t.index)
            ],
        }


def fuzz(n: int, field: FieldSpec, trials: int, seed: int, density: int = 2, jobs: int = 1) -> FuzzSummary:
    """Run ``trials`` independent trials; trial ``i`` is seeded with ``seed + i``."""
    if field.kind != "prime" or field.p not in FUZZ_PRIMES:
        raise ValueError(f"fuzzing supports GF(p) for p in {FUZZ_PRIMES}")
    if not 1 <= n <= FUZZ_MAX_N:
        raise ValueError(f"fuzzing supports 1 <= n <= {FUZZ_MAX_N}")
    if density < 0 or trials < 0:
        raise ValueError("density and trials must be nonnegative")
    summary = FuzzSummary(n, field.label, trials, seed, density)
    if jobs <= 1:
        results = (run_trial(field, n, density, seed, i) for i in range(trials))
        for t in results:
            summary.add(t)
        return summary
    chunks = [list(c) for c in np.array_split(np.arange(trials), jobs) if len(c)]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        parts = pool.map(_run_range, [(field.to_json(), n, density, seed, [int(i) for i in c]) for c in chunks])
        for part in parts:
            for t in part:
                summary.add(t)
    return summary
