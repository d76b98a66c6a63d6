"""Time the compiled GF(p) row reduction against the numpy fallback.

Run with ``python3 benchmarks/bench_rref.py``. Both kernels are checked to
agree on every input before timing.
"""

from __future__ import annotations

import argparse
import timeit

import numpy as np

from lienil.kernels import BACKEND, compiled_rref_mod_p, python_rref_mod_p


def cases(rng: np.random.Generator):
    # shapes typical of chain computations: many short rows of length n^2
    for n in (4, 6, 8):
        for p in (2, 5):
            yield f"{n * n}x{n * n} GF({p})", rng.integers(0, p, size=(n * n, n * n)), p
            yield f"{2 * n * n}x{n * n} GF({p})", rng.integers(0, p, size=(2 * n * n, n * n)), p


def main(argv=None) -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args(argv)
    print(f"active backend: {BACKEND}")
    if compiled_rref_mod_p is None:
        print("compiled kernel not built; timing the numpy fallback only")
    rng = np.random.default_rng(args.seed)
    print(f"{'case':>18} {'python ms':>10} {'cython ms':>10} {'speedup':>8}")
    for label, a, p in cases(rng):
        py = min(timeit.repeat(lambda: python_rref_mod_p(a, p), number=1, repeat=args.repeat)) * 1e3
        if compiled_rref_mod_p is None:
            print(f"{label:>18} {py:10.3f} {'-':>10} {'-':>8}")
            continue
        want, got = python_rref_mod_p(a, p), compiled_rref_mod_p(a, p)
        if want[1] != got[1] or not np.array_equal(want[0], got[0]):
            raise SystemExit(f"kernels disagree on {label}")
        cy = min(timeit.repeat(lambda: compiled_rref_mod_p(a, p), number=1, repeat=args.repeat)) * 1e3
        print(f"{label:>18} {py:10.3f} {cy:10.3f} {py / cy:7.1f}x")


if __name__ == "__main__":
    main()
