# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled kernel for truncated noncommutative polynomial products.

Semantically identical to nilpal._kernel_py; coefficients stay Python ints
so arithmetic is exact at arbitrary precision.
"""


def poly_mul(dict a, dict b, int[::1] table, Py_ssize_t m):
    cdef dict out = {}
    cdef Py_ssize_t ia, ib, idx, base
    cdef object ca, cb, prev
    for ia, ca in a.items():
        base = ia * m
        for ib, cb in b.items():
            idx = table[base + ib]
            if idx >= 0:
                prev = out.get(idx)
                if prev is None:
                    out[idx] = ca * cb
                else:
                    out[idx] = prev + ca * cb
    return {k: c for k, c in out.items() if c}
