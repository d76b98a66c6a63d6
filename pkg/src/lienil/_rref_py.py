"""Numpy row reduction over GF(p); the fallback when the compiled kernel is absent."""

from __future__ import annotations

import numpy as np


def rref_mod_p(a, p: int) -> tuple[np.ndarray, tuple[int, ...]]:
    """Return ``(rows, pivots)``: the nonzero rows of the RREF of ``a`` mod ``p``."""
    m = np.array(a, dtype=np.int64, copy=True) % p
    nrows, ncols = m.shape
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        nz = np.flatnonzero(m[r:, c])
        if nz.size == 0:
            continue
        i = r + int(nz[0])
        if i != r:
            m[[r, i]] = m[[i, r]]
        lead = int(m[r, c])
        if lead != 1:
            m[r] = (m[r] * pow(lead, -1, p)) % p
        col = m[:, c].copy()
        col[r] = 0
        hit = np.flatnonzero(col)
        if hit.size:
            m[hit] = (m[hit] - np.outer(col[hit], m[r])) % p
        pivots.append(c)
        r += 1
    return m[:r].copy(), tuple(pivots)
