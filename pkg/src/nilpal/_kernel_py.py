"""Pure-Python kernel for truncated noncommutative polynomial products.

Polynomials are dicts mapping a monomial index to an exact integer
coefficient.  `table` is the flattened monomial multiplication table of the
ambient basis: table[i*m + j] is the index of monomial i concatenated with
monomial j, or -1 when the product exceeds the truncation degree.
"""


def poly_mul(a, b, table, m):
    out = {}
    for ia, ca in a.items():
        base = ia * m
        for ib, cb in b.items():
            idx = table[base + ib]
            if idx >= 0:
                out[idx] = out.get(idx, 0) + ca * cb
    return {k: c for k, c in out.items() if c}
