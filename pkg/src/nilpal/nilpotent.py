"""Hall bases and exact arithmetic in free nilpotent groups.

The free nilpotent group of rank n and step k is the quotient of the free
group on x_1..x_n killing every iterated commutator of weight > k.  Elements
are kept in Hall normal form: the ordered product of integer powers of basic
commutators, weight-major.

Arithmetic runs in a faithful truncated-series model: x_i maps to 1 + X_i in
integer polynomials over noncommuting X_1..X_n, discarding all terms of
degree > k.  A word is trivial in the group iff its series is 1, so series
equality decides group equality; normal-form exponents are recovered weight
by weight, which doubles as a consistency check on every constructed element.
"""

from array import array
from functools import lru_cache
from itertools import product

from nilpal import kernel
from nilpal.intlinalg import mat_mul, mat_vec, smith_normal_form
from nilpal.words import Letter, Word, parse_word


class InternalError(RuntimeError):
    """An internal invariant failed; indicates a bug, not bad input."""


def _mobius(d):
    out = 1
    p = 2
    while p * p <= d:
        if d % p == 0:
            d //= p
            if d % p == 0:
                return 0
            out = -out
        p += 1
    if d > 1:
        out = -out
    return out


def witt_count(n, w):
    """Rank of the weight-w layer of the lower central series of F_n."""
    total = sum(_mobius(d) * n ** (w // d) for d in range(1, w + 1) if w % d == 0)
    return total // w


class BasicCommutator:
    """A generator, or a bracket [left, right] satisfying the Hall condition."""

    __slots__ = ("gen", "left", "right", "weight", "key", "index")

    def __init__(self, gen=None, left=None, right=None):
        if gen is not None:
            self.gen = gen
            self.left = None
            self.right = None
            self.weight = 1
            self.key = (1, gen)
        else:
            self.gen = None
            self.left = left
            self.right = right
            self.weight = left.weight + right.weight
            self.key = (self.weight, left.key, right.key)
        self.index = None

    def __eq__(self, other):
        return isinstance(other, BasicCommutator) and self.key == other.key

    def __hash__(self):
        return hash(self.key)

    def __repr__(self):
        return self.render()

    def render(self):
        if self.gen is not None:
            return f"x{self.gen}"
        parts = []
        node = self
        while node.gen is None:
            parts.append(node.right)
            node = node.left
        parts.append(node)
        parts.reverse()
        return "[" + ",".join(p.render() for p in parts) + "]"

    def as_word(self, rank):
        """Expand to a reduced free-group word."""
        if self.gen is not None:
            return Word((Letter(self.gen, 1),), rank)
        u = self.left.as_word(rank)
        v = self.right.as_word(rank)
        return u.inverse() * v.inverse() * u * v


def _build_elements(n, k):
    by_weight = [[BasicCommutator(gen=i) for i in range(1, n + 1)]]
    for w in range(2, k + 1):
        level = []
        for wl in range(1, w):
            for left in by_weight[wl - 1]:
                for right in by_weight[w - wl - 1]:
                    if left.key > right.key and (
                        left.gen is not None or left.right.key <= right.key
                    ):
                        level.append(BasicCommutator(left=left, right=right))
        level.sort(key=lambda c: c.key)
        by_weight.append(level)
    return by_weight


class HallBasis:
    """The ordered basic commutators of weight <= k for rank n, plus the
    machinery of the truncated-series model (built lazily, then read-only)."""

    def __init__(self, n, k):
        if n < 1 or k < 1:
            raise ValueError(f"rank and step must be positive, got n={n}, k={k}")
        self.n = n
        self.k = k
        self.by_weight = _build_elements(n, k)
        for w, level in enumerate(self.by_weight, start=1):
            expected = witt_count(n, w)
            if len(level) != expected:
                raise InternalError(
                    f"weight-{w} layer has {len(level)} elements, expected {expected}"
                )
        self.elements = [c for level in self.by_weight for c in level]
        for i, c in enumerate(self.elements):
            c.index = i
        self.weight_offset = []
        pos = 0
        for level in self.by_weight:
            self.weight_offset.append(pos)
            pos += len(level)
        self._monos_ready = False
        self._elt_polys = None
        self._geninv_polys = None
        self._iota_polys = None
        self._peel = {}
        self._deg_offset = [0]
        for w in range(k + 1):
            self._deg_offset.append(self._deg_offset[-1] + n**w)

    def __repr__(self):
        return f"HallBasis(n={self.n}, k={self.k}, size={len(self.elements)})"

    def weight_slice(self, w):
        start = self.weight_offset[w - 1]
        return slice(start, start + len(self.by_weight[w - 1]))

    # -- truncated-series machinery -------------------------------------

    def _ensure_monos(self):
        if self._monos_ready:
            return
        n, k = self.n, self.k
        monos = [()]
        for w in range(1, k + 1):
            monos.extend(product(range(1, n + 1), repeat=w))
        index = {mo: i for i, mo in enumerate(monos)}
        m = len(monos)
        table = array("i", bytes(4 * m * m))
        for i, a in enumerate(monos):
            base = i * m
            for j, b in enumerate(monos):
                if len(a) + len(b) <= k:
                    table[base + j] = index[a + b]
                else:
                    table[base + j] = -1
        self._monos = monos
        self._mono_count = m
        self._table = table
        self._monos_ready = True

    def mul(self, a, b):
        self._ensure_monos()
        return kernel.poly_mul(a, b, self._table, self._mono_count)

    def inv(self, a):
        self._ensure_monos()
        return kernel.poly_inv(a, self._table, self._mono_count, self.k)

    def pow(self, a, e):
        self._ensure_monos()
        return kernel.poly_pow(a, e, self._table, self._mono_count, self.k)

    def comm(self, a, b):
        return self.mul(self.mul(self.inv(a), self.inv(b)), self.mul(a, b))

    def gen_poly(self, i):
        self._ensure_monos()
        return {0: 1, self._mono_index_of((i,)): 1}

    def _mono_index_of(self, mo):
        return self._deg_offset[len(mo)] + sum(
            (c - 1) * self.n**p for p, c in enumerate(reversed(mo))
        ) if mo else 0

    def geninv_poly(self, i):
        if self._geninv_polys is None:
            self._geninv_polys = {}
        poly = self._geninv_polys.get(i)
        if poly is None:
            poly = self.inv(self.gen_poly(i))
            self._geninv_polys[i] = poly
        return poly

    def elt_poly(self, idx):
        if self._elt_polys is None:
            self._elt_polys = [None] * len(self.elements)
        poly = self._elt_polys[idx]
        if poly is None:
            c = self.elements[idx]
            if c.gen is not None:
                poly = self.gen_poly(c.gen)
            else:
                poly = self.comm(self.elt_poly(c.left.index), self.elt_poly(c.right.index))
            self._elt_polys[idx] = poly
        return poly

    def iota_poly(self, idx):
        """Series of the basis element with every generator inverted."""
        if self._iota_polys is None:
            self._iota_polys = [None] * len(self.elements)
        poly = self._iota_polys[idx]
        if poly is None:
            c = self.elements[idx]
            if c.gen is not None:
                poly = self.geninv_poly(c.gen)
            else:
                poly = self.comm(self.iota_poly(c.left.index), self.iota_poly(c.right.index))
            self._iota_polys[idx] = poly
        return poly

    def _peel_solver(self, w):
        """Left inverse of the degree-w Lie coordinate matrix."""
        solver = self._peel.get(w)
        if solver is None:
            level = self.by_weight[w - 1]
            m = len(level)
            nmono = self.n**w
            off = self._deg_offset[w]
            emat = [[0] * m for _ in range(nmono)]
            for j, c in enumerate(level):
                for i, coeff in self.elt_poly(c.index).items():
                    if off <= i < off + nmono:
                        emat[i - off][j] = coeff
            u, d, _v = smith_normal_form(emat)
            if any(d[i][i] != 1 for i in range(m)):
                raise InternalError(f"weight-{w} layer is not unimodularly solvable")
            linv = mat_mul(_v, u[:m])
            solver = (linv, emat, off, nmono)
            self._peel[w] = solver
        return solver

    def ordered_block_poly(self, w, coeffs):
        """Series of the ordered product of the weight-w block with exponents."""
        out = {0: 1}
        start = self.weight_offset[w - 1]
        for j, e in enumerate(coeffs):
            if e:
                out = self.mul(out, self.pow(self.elt_poly(start + j), e))
        return out

    def element_from_poly(self, poly):
        """Recover Hall exponents of a group series; verifies exactness."""
        if poly.get(0) != 1:
            raise InternalError("series has constant term != 1")
        exps = [0] * len(self.elements)
        r = poly
        for w in range(1, self.k + 1):
            off = self._deg_offset[w]
            nmono = self.n**w
            t = [0] * nmono
            seen = False
            for i, c in r.items():
                if off <= i < off + nmono:
                    t[i - off] = c
                    seen = True
            if not seen:
                continue
            if not self.by_weight[w - 1]:
                raise InternalError(f"degree-{w} terms outside the group image")
            linv, emat, _, _ = self._peel_solver(w)
            x = mat_vec(linv, t)
            for row, tv in zip(emat, t):
                if sum(rv * xv for rv, xv in zip(row, x) if xv) != tv:
                    raise InternalError(f"degree-{w} component is not a Lie element")
            start = self.weight_offset[w - 1]
            exps[start:start + len(x)] = x
            r = self.mul(self.inv(self.ordered_block_poly(w, x)), r)
        if r != {0: 1}:
            raise InternalError("series does not collapse to the normal form")
        return NilElement(self, poly, tuple(exps))

    # -- element builders -------------------------------------------------

    def one(self):
        self._ensure_monos()
        return NilElement(self, {0: 1}, (0,) * len(self.elements))

    def generator(self, i):
        if not 1 <= i <= self.n:
            raise ValueError(f"generator index {i} out of range 1..{self.n}")
        exps = [0] * len(self.elements)
        exps[i - 1] = 1
        return NilElement(self, self.gen_poly(i), tuple(exps))

    def from_exponents(self, exps):
        exps = tuple(exps)
        if len(exps) != len(self.elements):
            raise ValueError("exponent vector has wrong length")
        poly = {0: 1}
        for w in range(1, self.k + 1):
            block = exps[self.weight_slice(w)]
            if any(block):
                poly = self.mul(poly, self.ordered_block_poly(w, block))
        return NilElement(self, poly, exps)

    def from_word(self, w):
        return collect(w, self)

    def from_text(self, text):
        return collect(parse_word(text, self.n), self)


@lru_cache(maxsize=None)
def hall_basis(n, k):
    return HallBasis(n, k)


class NilElement:
    """Canonical element of a free nilpotent group.

    Two elements are equal iff their Hall exponent vectors are equal; the
    cached series is an equivalent canonical form and makes comparison cheap.
    """

    __slots__ = ("basis", "poly", "exponents")

    def __init__(self, basis, poly, exponents):
        self.basis = basis
        self.poly = poly
        self.exponents = exponents

    def __eq__(self, other):
        return (
            isinstance(other, NilElement)
            and self.basis is other.basis
            and self.exponents == other.exponents
        )

    def __hash__(self):
        return hash((id(self.basis), self.exponents))

    def __repr__(self):
        return f"<{render_element(self)}>"

    def __mul__(self, other):
        return multiply(self, other)

    def __pow__(self, e):
        return power(self, e)

    def inverse(self):
        return invert(self)

    def is_identity(self):
        return self.poly == {0: 1}

    def abelianization(self):
        return self.exponents[: self.basis.n]

    def weight_block(self, w):
        return self.exponents[self.basis.weight_slice(w)]


def _same_basis(a, b):
    if a.basis is not b.basis:
        raise ValueError("elements live in different bases")
    return a.basis


def collect(word, basis):
    """Canonical normal form of the image of a free word."""
    if word.rank != basis.n:
        raise ValueError(f"word rank {word.rank} != basis rank {basis.n}")
    poly = {0: 1}
    for let in word.letters:
        factor = basis.gen_poly(let.index) if let.sign > 0 else basis.geninv_poly(let.index)
        poly = basis.mul(poly, factor)
    return basis.element_from_poly(poly)


def multiply(a, b):
    basis = _same_basis(a, b)
    return basis.element_from_poly(basis.mul(a.poly, b.poly))


def invert(a):
    return a.basis.element_from_poly(a.basis.inv(a.poly))


def power(a, e):
    return a.basis.element_from_poly(a.basis.pow(a.poly, e))


def commutator(a, b):
    """[a, b] = a^-1 b^-1 a b."""
    basis = _same_basis(a, b)
    return basis.element_from_poly(basis.comm(a.poly, b.poly))


def left_normed(elements):
    """[g1, g2, ..., gm] folded left-normed."""
    elements = list(elements)
    if len(elements) < 2:
        raise ValueError("need at least two elements")
    acc = commutator(elements[0], elements[1])
    for nxt in elements[2:]:
        acc = commutator(acc, nxt)
    return acc


def bar(g):
    """Element reversal: invert every generator, then invert the result.

    For any word w, bar(collect(w)) == collect(reverse_word(w)).
    """
    basis = g.basis
    poly = {0: 1}
    for w in range(1, basis.k + 1):
        start = basis.weight_offset[w - 1]
        for j, e in enumerate(g.exponents[basis.weight_slice(w)]):
            if e:
                poly = basis.mul(poly, basis.pow(basis.iota_poly(start + j), e))
    return basis.element_from_poly(basis.inv(poly))


def weight(g):
    """Largest l with g in the weight-l filtration layer; k+1 for the identity."""
    basis = g.basis
    for w in range(1, basis.k + 1):
        if any(g.exponents[basis.weight_slice(w)]):
            return w
    return basis.k + 1


def verify_w2k(ys, k):
    """Check the central-product identity for a tuple of 2k elements.

    The product [y_1,..,y_2k] * bar([y_1,..,y_2k]) is central in step 2k+1;
    it must equal the recursively defined word w_2k with
    w_2 = [y1, y2, y1 y2] and
    w_{2j+2} = [w_2j, y_{2j+1}, y_{2j+2}]
               * [y1,..,y_2j, y_{2j+1}, y_{2j+1} y_{2j+2}, y_{2j+2}].
    """
    ys = list(ys)
    if len(ys) != 2 * k:
        raise ValueError(f"need exactly {2 * k} elements, got {len(ys)}")
    basis = ys[0].basis
    if basis.k != 2 * k + 1:
        raise ValueError(f"basis step must be {2 * k + 1}, got {basis.k}")
    z = left_normed(ys)
    lhs = multiply(z, bar(z))
    w = commutator(commutator(ys[0], ys[1]), multiply(ys[0], ys[1]))
    for j in range(1, k):
        a, b = ys[2 * j], ys[2 * j + 1]
        first = left_normed([w, a, b])
        second = left_normed(ys[: 2 * j] + [a, multiply(a, b), b])
        w = multiply(first, second)
    return lhs == w


def render_element(g):
    """Canonical rendering, factors in basis order; round-trips the grammar."""
    parts = []
    for c, e in zip(g.basis.elements, g.exponents):
        if e:
            parts.append(c.render() + (f"^{e}" if e != 1 else ""))
    return " * ".join(parts) if parts else "1"


def element_as_word(g):
    """Some free word collecting to g (basis expansion of the normal form)."""
    out = Word((), g.basis.n)
    for c, e in zip(g.basis.elements, g.exponents):
        if e:
            w = c.as_word(g.basis.n)
            if e < 0:
                w = w.inverse()
            for _ in range(abs(e)):
                out = out * w
    return out
