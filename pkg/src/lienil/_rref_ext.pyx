# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled row reduction over GF(p) for int64 matrices (p < 2**31)."""

import numpy as np
cimport numpy as cnp
from libc.stdint cimport int64_t

cnp.import_array()


cdef inline int64_t _inv_mod(int64_t a, int64_t p):
    cdef int64_t t = 0, new_t = 1, r = p, new_r = a, q, tmp
    while new_r != 0:
        q = r // new_r
        tmp = t - q * new_t
        t = new_t
        new_t = tmp
        tmp = r - q * new_r
        r = new_r
        new_r = tmp
    if t < 0:
        t += p
    return t


def rref_mod_p(a, int64_t p):
    """Return ``(rows, pivots)``: the nonzero rows of the RREF of ``a`` mod ``p``."""
    cdef cnp.ndarray[int64_t, ndim=2] m = np.array(a, dtype=np.int64, copy=True) % p
    cdef int64_t[:, :] mv = m
    cdef Py_ssize_t nrows = mv.shape[0], ncols = mv.shape[1]
    cdef Py_ssize_t r = 0, c, i, j, piv
    cdef int64_t inv, f, tmp
    pivots = []
    for c in range(ncols):
        if r == nrows:
            break
        piv = -1
        for i in range(r, nrows):
            if mv[i, c] != 0:
                piv = i
                break
        if piv < 0:
            continue
        if piv != r:
            for j in range(c, ncols):
                tmp = mv[r, j]
                mv[r, j] = mv[piv, j]
                mv[piv, j] = tmp
        inv = _inv_mod(mv[r, c], p)
        if inv != 1:
            for j in range(c, ncols):
                mv[r, j] = (mv[r, j] * inv) % p
        for i in range(nrows):
            if i == r:
                continue
            f = mv[i, c]
            if f == 0:
                continue
            for j in range(c, ncols):
                if mv[r, j] != 0:
                    mv[i, j] = (mv[i, j] - f * mv[r, j]) % p
                    if mv[i, j] < 0:
                        mv[i, j] += p
        pivots.append(c)
        r += 1
    return m[:r].copy(), tuple(pivots)
