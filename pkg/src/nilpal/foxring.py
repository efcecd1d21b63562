"""Fox derivatives in a finite truncation of the free-group ring.

The ring is Z[F_n] modulo the ideal generated by all ring commutators of
augmentation elements and by all products of three augmentation elements.
That quotient is spanned by 1, the elements (x_i - 1), and the unordered
products (x_i - 1)(x_j - 1); group elements act trivially on the quadratic
part, so a finite exact representation suffices:

    constant  +  sum_i lin[i] (x_i - 1)  +  sum_{i<=j} pair (x_i - 1)(x_j - 1)

The diagonal (x_i - 1)^2 terms carry no factor-of-2 convention.  The sum of
i-th derivatives of the image defect of a central automorphism must vanish
here whenever the automorphism lifts to the free group; that is the tameness
obstruction computed by `bglm_condition`.
"""

from nilpal.words import Letter, Word, left_normed_commutator


class PreconditionError(ValueError):
    """An operation's mathematical precondition failed on the given input."""


class RingElemModR:
    __slots__ = ("n", "const", "lin", "quad")

    def __init__(self, n, const=0, lin=None, quad=None):
        self.n = n
        self.const = const
        self.lin = tuple(lin) if lin is not None else (0,) * n
        if quad is None:
            quad = tuple((0,) * n for _ in range(n))
        else:
            quad = tuple(tuple(row) for row in quad)
            for i in range(n):
                for j in range(i):
                    if quad[i][j] != quad[j][i]:
                        raise ValueError("quadratic part must be symmetric")
        self.quad = quad

    def __eq__(self, other):
        return (isinstance(other, RingElemModR) and self.n == other.n
                and self.const == other.const and self.lin == other.lin
                and self.quad == other.quad)

    def __hash__(self):
        return hash((self.n, self.const, self.lin, self.quad))

    def __repr__(self):
        return f"RingElemModR({render_ring(self)})"

    def __add__(self, other):
        return add(self, other)

    def __sub__(self, other):
        return add(self, negate(other))

    def __neg__(self):
        return negate(self)

    def __mul__(self, other):
        return mul(self, other)

    def is_zero(self):
        return self.const == 0 and not any(self.lin) and not any(map(any, self.quad))

    def pair(self, i, j):
        """Coefficient of the unordered pair {i, j}, 1-based."""
        return self.quad[i - 1][j - 1]


def ring_zero(n):
    return RingElemModR(n)


def ring_one(n):
    return RingElemModR(n, const=1)


def ring_delta(i, n):
    """The augmentation generator x_i - 1."""
    lin = [0] * n
    lin[i - 1] = 1
    return RingElemModR(n, lin=lin)


def _check_dim(a, b):
    if a.n != b.n:
        raise ValueError(f"dimension mismatch: {a.n} vs {b.n}")


def add(a, b):
    _check_dim(a, b)
    return RingElemModR(
        a.n,
        a.const + b.const,
        [x + y for x, y in zip(a.lin, b.lin)],
        [[x + y for x, y in zip(ra, rb)] for ra, rb in zip(a.quad, b.quad)],
    )


def negate(a):
    return RingElemModR(a.n, -a.const, [-x for x in a.lin],
                        [[-x for x in row] for row in a.quad])


def mul(a, b):
    """Product; degree-3 terms die and the quotient is commutative."""
    _check_dim(a, b)
    n = a.n
    quad = [
        [a.const * b.quad[i][j] + b.const * a.quad[i][j] for j in range(n)]
        for i in range(n)
    ]
    for i in range(n):
        ai = a.lin[i]
        if ai:
            for j in range(n):
                bj = b.lin[j]
                if bj:
                    v = ai * bj
                    quad[i][j] += v
                    if i != j:
                        quad[j][i] += v
    return RingElemModR(
        a.n,
        a.const * b.const,
        [a.const * y + b.const * x for x, y in zip(a.lin, b.lin)],
        quad,
    )


def _letter_elem(let, n):
    lin = [0] * n
    if let.sign > 0:
        lin[let.index - 1] = 1
        return RingElemModR(n, const=1, lin=lin)
    # x^-1 = 1 - (x-1) + (x-1)^2 after truncation
    lin[let.index - 1] = -1
    quad = [[0] * n for _ in range(n)]
    quad[let.index - 1][let.index - 1] = 1
    return RingElemModR(n, const=1, lin=lin, quad=quad)


def embed(w):
    """Ring image of a word; multiplicative, with augmentation 1."""
    out = ring_one(w.rank)
    for let in w.letters:
        out = mul(out, _letter_elem(let, w.rank))
    return out


def _letter_derivative(let, j, n):
    if let.index != j:
        return ring_zero(n)
    if let.sign > 0:
        return ring_one(n)
    # d(x^-1) = -x^-1 d(x)
    return negate(_letter_elem(let, n))


def fox_derivative(w, j):
    """j-th Fox derivative of a word, evaluated in the quotient ring.

    Left-to-right product rule: d(uv) = d(u) + u d(v), with d(x_i) = [i == j].
    """
    if not 1 <= j <= w.rank:
        raise ValueError(f"derivative index {j} out of range 1..{w.rank}")
    out = ring_zero(w.rank)
    prefix = ring_one(w.rank)
    for let in w.letters:
        out = add(out, mul(prefix, _letter_derivative(let, j, w.rank)))
        prefix = mul(prefix, _letter_elem(let, w.rank))
    return out


def render_ring(a):
    """Readable rendering; quadratic residues as `(i,j): c` in lex pair order."""
    parts = []
    if a.const:
        parts.append(str(a.const))
    for i, c in enumerate(a.lin, start=1):
        if c:
            parts.append(f"d{i}: {c}")
    parts.extend(render_quadratic(a))
    return "; ".join(parts) if parts else "0"


def render_quadratic(a):
    out = []
    for i in range(1, a.n + 1):
        for j in range(i, a.n + 1):
            c = a.pair(i, j)
            if c:
                out.append(f"({i},{j}): {c}")
    return out


# ---------------------------------------------------------------------------
# the fixed derivative table for weight-3 commutators

def _gen_word(i, n):
    return Word((Letter(i, 1),), n)


def _comm_word(indices, n):
    return left_normed_commutator([_gen_word(i, n) for i in indices])


_TABLE_ROWS = (
    ("d_i[xa,xb,xc]", ("i", "a", "b", "c"), ("a", "b", "c"), None),
    ("d_i[xa,xb,xi]", ("i", "a", "b"), ("a", "b", "i"), None),
    ("d_i[xi,xa,xb]", ("i", "a", "b"), ("i", "a", "b"), (1, "a", "b")),
    ("d_i[xa,xi,xb]", ("i", "a", "b"), ("a", "i", "b"), (-1, "a", "b")),
    ("d_i[xi,xa,xi]", ("i", "a"), ("i", "a", "i"), (1, "i", "a")),
    ("d_i[xa,xi,xi]", ("i", "a"), ("a", "i", "i"), (-1, "i", "a")),
    ("d_i[xi,xa,xa]", ("i", "a"), ("i", "a", "a"), (1, "a", "a")),
    ("d_i[xa,xi,xa]", ("i", "a"), ("a", "i", "a"), (-1, "a", "a")),
)


class FoxTableReport:
    def __init__(self, n, rows):
        self.n = n
        self.rows = rows  # list of (name, cases, failures)

    @property
    def ok(self):
        return all(not failures for _, _, failures in self.rows)

    def lines(self):
        out = []
        for name, cases, failures in self.rows:
            status = "PASS" if not failures else "FAIL"
            out.append(f"{name}: {status} ({cases} cases)")
            out.extend(f"  counterexample {c}" for c in failures)
        return out


def check_fox_table(n):
    """Evaluate every derivative-table row over all distinct-index assignments."""
    from itertools import permutations

    rows = []
    for name, letters, pattern, expected in _TABLE_ROWS:
        cases = 0
        failures = []
        for assign in permutations(range(1, n + 1), len(letters)):
            env = dict(zip(letters, assign))
            word = _comm_word([env[s] for s in pattern], n)
            got = fox_derivative(word, env["i"])
            if expected is None:
                want = ring_zero(n)
            else:
                sign, u, v = expected
                want = mul(ring_delta(env[u], n), ring_delta(env[v], n))
                if sign < 0:
                    want = negate(want)
            cases += 1
            if got != want:
                failures.append(f"{name} with {env}: got {render_ring(got)}")
        rows.append((name, cases, failures))
    return FoxTableReport(n, rows)


# ---------------------------------------------------------------------------
# tameness obstruction

def _in_gamma3(w):
    """Exact membership of a free word in the third lower-central term."""
    from nilpal.nilpotent import collect, hall_basis

    return collect(w, hall_basis(w.rank, 2)).is_identity()


def bglm_residue(ws):
    """The sum of i-th derivatives of the given defect words, mod the ideal.

    Each word must lie in the third lower-central term of the free group;
    the constant and linear parts of the sum then vanish identically and the
    residue is carried entirely by the quadratic part.
    """
    ws = list(ws)
    n = ws[0].rank
    if len(ws) != n:
        raise ValueError(f"need {n} words, got {len(ws)}")
    for i, w in enumerate(ws, start=1):
        if w.rank != n:
            raise ValueError("words have mixed ranks")
        if not _in_gamma3(w):
            raise PreconditionError(
                f"word {i} is not in the third lower-central term"
            )
    total = ring_zero(n)
    for i, w in enumerate(ws, start=1):
        total = add(total, fox_derivative(w, i))
    if total.const != 0 or any(total.lin):
        raise RuntimeError("constant/linear parts must vanish on valid input")
    return total


def bglm_condition(ws):
    """True iff the derivative sum vanishes in the quotient ring."""
    return bglm_residue(ws).is_zero()
