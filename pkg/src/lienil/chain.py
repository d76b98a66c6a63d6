"""The annihilator chain ``R_1 > R_2 > ... > R_l = F I`` and the bound pipeline.

For ``R`` inside the upper triangular constant-diagonal matrices, acting on
row vectors ``V = F^n``::

    J_k = radical of R_k,   P_0 = V,   P_k = P_(k-1) J_k,
    U_k = a complement of P_k in P_(k-1),
    R_(k+1) = F I + {a in R_k : U_k a = 0},

stopping at the first ``k`` with ``J_k = 0``.
"""

from __future__ import annotations

import random
import time
from collections import Counter
from dataclasses import asdict, dataclass, field as dc_field
from typing import Any

import numpy as np

from lienil.algebra import (
    AlgebraError,
    MatrixAlgebra,
    annihilator,
    nilpotency_degree,
    radical_triangular,
)
from lienil.bounds import floor_bound, m_closed_form
from lienil.fields import FieldSpec
from lienil.lie import lie_nilpotence_index, lie_solvability_index
from lienil.linalg import (
    Subspace,
    complement_within,
    is_direct_sum,
    kernel_of_action,
    module_product,
    product_space,
)


class ChainError(AlgebraError):
    pass


DETERMINISTIC = "deterministic"


@dataclass(frozen=True)
class ChainLevel:
    algebra: MatrixAlgebra  # R_k
    radical: Subspace  # J_k
    complement: Subspace  # U_k
    product: Subspace  # P_k = P_(k-1) J_k

    @property
    def d(self) -> int:
        return self.complement.rank


@dataclass(frozen=True)
class ChainTrace:
    field: FieldSpec
    n: int
    V: Subspace
    levels: tuple
    strategy: str = DETERMINISTIC

    @property
    def length(self) -> int:
        return len(self.levels)

    @property
    def d(self) -> tuple[int, ...]:
        return tuple(lv.d for lv in self.levels)

    @property
    def dims(self) -> tuple[int, ...]:
        return tuple(lv.algebra.dim for lv in self.levels)

    def previous_product(self, k: int) -> Subspace:
        """``P_(k-1)`` for 1-based level ``k``."""
        return self.V if k == 1 else self.levels[k - 2].product

    def level(self, k: int) -> ChainLevel:
        """1-based access."""
        return self.levels[k - 1]

    def check_invariants(self) -> None:
        """Raise ``ChainError`` unless every structural invariant holds."""
        if not self.levels:
            raise ChainError("empty chain")
        for k, lv in enumerate(self.levels, start=1):
            prev = self.previous_product(k)
            if not is_direct_sum([lv.complement, lv.product], prev):
                raise ChainError(f"level {k}: P_(k-1) is not U_k (+) P_k")
            if lv.d < 1:
                raise ChainError(f"level {k}: empty complement")
            if k > 1 and not (self.levels[k - 2].algebra.carrier.contains(lv.algebra.carrier)
                              and self.levels[k - 2].algebra.dim > lv.algebra.dim):
                raise ChainError(f"level {k}: R_k is not strictly smaller than R_(k-1)")
            last = k == self.length
            if lv.radical.is_zero() != last:
                raise ChainError(f"level {k}: chain length is not the first level with zero radical")
        if self.levels[-1].algebra.dim != 1:
            raise ChainError("chain does not end at F I")
        if sum(self.d) != self.n:
            raise ChainError("the d-sequence does not sum to n")

    def to_json(self, bases: bool = True) -> dict:
        f = self.field

        def fmt(s: Subspace):
            return [[f.format_raw(x) for x in row] for row in s.basis]

        out: dict[str, Any] = {
            "n": self.n,
            "field": f.to_json(),
            "strategy": self.strategy,
            "length": self.length,
            "d": list(self.d),
            "levels": [],
        }
        for k, lv in enumerate(self.levels, start=1):
            entry = {
                "k": k,
                "dim_R": lv.algebra.dim,
                "dim_J": lv.radical.rank,
                "dim_U": lv.d,
                "dim_P": lv.product.rank,
            }
            if bases:
                entry["U_basis"] = fmt(lv.complement)
                entry["J_basis"] = fmt(lv.radical)
            out["levels"].append(entry)
        return out


def _require_constant_diagonal(r: MatrixAlgebra) -> None:
    if not r.in_constant_diagonal_upper():
        raise ChainError("algebra is not inside the upper triangular constant-diagonal matrices; triangularize first")
    if not r.carrier.contains_vector(r.field.eye(r.n).reshape(-1)):
        raise ChainError("algebra must contain the identity")


def _strategy_label(seed: int | None) -> str:
    return DETERMINISTIC if seed is None else f"seeded({seed})"


def compute_chain(r: MatrixAlgebra, seed: int | None = None, rng: random.Random | None = None) -> ChainTrace:
    """Build the chain; complements are greedy unless ``seed`` or ``rng`` is given."""
    _require_constant_diagonal(r)
    f, n = r.field, r.n
    if rng is None and seed is not None:
        rng = random.Random(seed)
    eye = f.eye(n).reshape(1, -1)
    v = Subspace.full(f, n)
    levels: list[ChainLevel] = []
    current = r
    prev = v
    matrix_product = r.carrier  # J_0 J_1 ... J_k as a matrix space, J_0 = R
    expected_radical: Subspace | None = None
    for _ in range(n + 1):
        j = radical_triangular(current)
        if expected_radical is not None and j != expected_radical:
            raise ChainError("radical of R_(k+1) differs from the annihilator of U_k")
        p = module_product(prev, j)
        u = complement_within(p, prev, rng)
        levels.append(ChainLevel(current, j, u, p))
        matrix_product = product_space(matrix_product, j)
        if matrix_product.is_zero() != j.is_zero():
            raise ChainError("product and radical stopping criteria disagree")
        if j.is_zero():
            break
        ann = annihilator(current.carrier, u)
        nxt = Subspace.span(f, n * n, np.concatenate([eye, ann.basis]))
        current = MatrixAlgebra(f, n, nxt, unital=True, verify=True)
        expected_radical = ann
        prev = p
    else:
        raise ChainError("chain failed to terminate")
    trace = ChainTrace(f, n, v, tuple(levels), _strategy_label(seed) if rng is None or seed is not None else "seeded")
    if trace.level(1).algebra != r:
        raise ChainError("first level is not the input algebra")
    trace.check_invariants()
    return trace


@dataclass
class CheckItem:
    name: str
    passed: bool
    detail: str = ""


@dataclass
class ChainReport:
    items: list = dc_field(default_factory=list)

    @property
    def all_passed(self) -> bool:
        return all(i.passed for i in self.items)

    def failed(self) -> list[str]:
        return [i.name for i in self.items if not i.passed]

    def add(self, name: str, passed: bool, detail: str = "") -> None:
        self.items.append(CheckItem(name, bool(passed), detail))

    def to_json(self) -> dict:
        return {"all_passed": self.all_passed, "items": [asdict(i) for i in self.items]}


def verify_chain(t: ChainTrace) -> ChainReport:
    """Re-derive the chain identities from the stored subspaces; never raises."""
    rep = ChainReport()
    f, n = t.field, t.n
    ell = t.length
    us = [lv.complement for lv in t.levels]
    total = 0
    for k in range(1, ell + 1):
        lv = t.level(k)
        prev = t.previous_product(k)
        tail = us[k - 1:]
        rep.add(f"level_split[{k}]", is_direct_sum([lv.complement, lv.product], prev),
                "P_(k-1) = U_k (+) P_k")
        generated = module_product(lv.complement, lv.algebra.carrier)
        rep.add(f"complement_generates[{k}]", generated == prev and is_direct_sum(tail, prev),
                "U_k R_k = P_(k-1) = U_k (+) ... (+) U_l")
        killers = kernel_of_action(prev, lv.algebra.carrier)
        rep.add(f"faithful[{k}]", killers.is_zero(), "only 0 in R_k kills P_(k-1)")
        total += lv.d
        lhs = module_product(lv.complement, lv.radical).rank
        rep.add(f"image_dimension[{k}]", lhs == n - total, f"dim U_k J_k = {lhs}, n - sum d = {n - total}")
        if k < ell:
            nxt = t.level(k + 1).algebra
            rep.add(f"strict_descent[{k}]",
                    lv.algebra.carrier.contains(nxt.carrier) and nxt.dim < lv.algebra.dim,
                    f"dim R_k = {lv.algebra.dim}, dim R_(k+1) = {nxt.dim}")
    rep.add("module_decomposition", is_direct_sum(us, Subspace.full(f, n)), "V = U_1 (+) ... (+) U_l")
    rep.add("ends_at_scalars", t.levels[-1].algebra.dim == 1 and t.levels[-1].radical.is_zero(), "R_l = F I")
    rep.add("d_sums_to_n", sum(t.d) == n and all(d >= 1 for d in t.d), f"d = {t.d}")
    return rep


# --- bound pipeline -------------------------------------------------------

@dataclass
class Verdict:
    name: str
    lhs: int
    rhs: int
    passed: bool

    @classmethod
    def le(cls, name: str, lhs: int, rhs: int) -> Verdict:
        return cls(name, int(lhs), int(rhs), lhs <= rhs)


@dataclass
class BoundReport:
    n: int
    field: str
    dimension: int
    lie_index: int | None
    solvability_index: int | None
    chain_length: int | None = None
    radical_degree: int | None = None
    d: list | None = None
    M_chain: int | None = None
    M_lie: int | None = None
    floor_bound: int | None = None
    verdicts: list = dc_field(default_factory=list)
    chain_checks: ChainReport | None = None
    timing: float | None = None
    notes: list = dc_field(default_factory=list)

    @property
    def all_passed(self) -> bool:
        ok = all(v.passed for v in self.verdicts)
        return ok and (self.chain_checks is None or self.chain_checks.all_passed)

    def violations(self) -> list[str]:
        out = [v.name for v in self.verdicts if not v.passed]
        if self.chain_checks is not None:
            out.extend(self.chain_checks.failed())
        return out

    def to_json(self, timing: bool = True) -> dict:
        out = {
            "n": self.n,
            "field": self.field,
            "dimension": self.dimension,
            "lie_index": self.lie_index if self.lie_index is not None else "not Lie nilpotent",
            "solvability_index": self.solvability_index if self.solvability_index is not None else "not solvable",
            "chain_length": self.chain_length,
            "radical_degree": self.radical_degree,
            "d": self.d,
            "M_chain": self.M_chain,
            "M_lie": self.M_lie,
            "floor_bound": self.floor_bound,
            "verdicts": [asdict(v) for v in self.verdicts],
            "chain_checks": self.chain_checks.to_json() if self.chain_checks is not None else None,
            "all_passed": self.all_passed,
            "notes": list(self.notes),
        }
        if timing:
            out["timing"] = self.timing
        return out


def bound_check(r: MatrixAlgebra, trace: ChainTrace | None = None) -> BoundReport:
    """Chain, radical degree and Lie index of ``R`` with every bound they imply."""
    start = time.perf_counter()
    _require_constant_diagonal(r)
    n = r.n
    t = trace if trace is not None else compute_chain(r)
    j = t.level(1).radical
    nu = nilpotency_degree(j)
    m = lie_nilpotence_index(r)
    if m is None:
        raise ChainError("constant-diagonal triangular algebra reported as not Lie nilpotent")
    ell = t.length
    rep = BoundReport(
        n=n,
        field=r.field.label,
        dimension=r.dim,
        lie_index=m,
        solvability_index=lie_solvability_index(r),
        chain_length=ell,
        radical_degree=nu,
        d=list(t.d),
        M_chain=m_closed_form(ell, n),
        M_lie=m_closed_form(m + 1, n),
        floor_bound=floor_bound(m + 1, n),
    )
    rep.verdicts = [
        Verdict.le("chain_length_le_radical_degree", ell, nu),
        Verdict.le("chain_length_le_lie_index_plus_one", ell, m + 1),
        Verdict.le("dim_le_M_of_chain_length", r.dim, rep.M_chain),
        Verdict.le("dim_le_M_of_lie_index_plus_one", r.dim, rep.M_lie),
        Verdict.le("dim_le_triangular_ceiling", r.dim, (n * n - n) // 2 + 1),
        Verdict.le("dim_le_M_of_radical_degree", r.dim, m_closed_form(nu, n)),
    ]
    rep.chain_checks = verify_chain(t)
    rep.timing = time.perf_counter() - start
    return rep


def direct_bound_check(r: MatrixAlgebra) -> BoundReport:
    """Lie index and ``dim R <= M(m+1, n)`` without a chain (any algebra)."""
    start = time.perf_counter()
    m = lie_nilpotence_index(r)
    rep = BoundReport(n=r.n, field=r.field.label, dimension=r.dim, lie_index=m,
                      solvability_index=lie_solvability_index(r))
    if m is None:
        rep.notes.append("not Lie nilpotent: bound checks skipped")
    else:
        rep.M_lie = m_closed_form(m + 1, r.n)
        rep.floor_bound = floor_bound(m + 1, r.n)
        rep.verdicts = [Verdict.le("dim_le_M_of_lie_index_plus_one", r.dim, rep.M_lie)]
    rep.timing = time.perf_counter() - start
    return rep


# --- complement sensitivity -----------------------------------------------

@dataclass
class SensitivityReport:
    trials: int
    seed: int
    baseline_dims: tuple
    baseline_d: tuple
    dim_sequences: Counter
    d_sequences: Counter
    lengths: Counter

    @property
    def length_varied(self) -> bool:
        return len(self.lengths) > 1

    @property
    def d_varied(self) -> bool:
        return len(self.d_sequences) > 1

    @property
    def dims_varied(self) -> bool:
        return len(self.dim_sequences) > 1

    def to_json(self) -> dict:
        def enc(c: Counter):
            return [{"sequence": list(k), "count": v} for k, v in sorted(c.items())]

        return {
            "trials": self.trials,
            "seed": self.seed,
            "baseline_dims": list(self.baseline_dims),
            "baseline_d": list(self.baseline_d),
            "dim_sequences": enc(self.dim_sequences),
            "d_sequences": enc(self.d_sequences),
            "lengths": {str(k): v for k, v in sorted(self.lengths.items())},
            "length_varied": self.length_varied,
            "d_varied": self.d_varied,
            "dims_varied": self.dims_varied,
        }


def complement_sensitivity_experiment(r: MatrixAlgebra, trials: int, seed: int) -> SensitivityReport:
    """Rebuild the chain with random complements and tally what changes.

    Only dimension data are compared; nothing is asserted about the outcome.
    """
    if trials < 1:
        raise ValueError("trials must be at least 1")
    base = compute_chain(r)
    dims: Counter = Counter()
    ds: Counter = Counter()
    lengths: Counter = Counter()
    for i in range(trials):
        t = compute_chain(r, seed=seed + i)
        dims[t.dims] += 1
        ds[t.d] += 1
        lengths[t.length] += 1
    return SensitivityReport(trials, seed, base.dims, base.d, dims, ds, lengths)
