import random
from itertools import permutations

import pytest

from nilpal.autos import (
    Decomposition,
    Endo,
    NotAutomorphismError,
    UndecidedError,
    alpha,
    classify,
    compose,
    compose_symbols,
    decompose_bglm,
    decompose_central,
    endo_power,
    identity_endo,
    inner,
    inverse,
    inverse_with_factors,
    is_automorphism,
    make_endo,
    make_generator,
    mu,
    palindromic_witnesses,
    parse_endo_file,
    phi2,
    phi3,
    psi,
    quotient_rank_q,
    render_endo,
    render_symbol,
    sigma,
    solve_conjugator,
    t,
    tameness_necessary,
    tameness_residue,
    verify_tame_factorization,
)
from nilpal.foxring import PreconditionError
from nilpal.nilpotent import (
    bar,
    collect,
    element_as_word,
    hall_basis,
    invert,
    multiply,
    power,
    weight,
)
from nilpal.words import parse_word, word_from_ints


def rand_word(rng, n, max_len=8):
    alphabet = [i for i in range(-n, n + 1) if i]
    return word_from_ints(
        [rng.choice(alphabet) for _ in range(rng.randint(0, max_len))], n
    )


def rand_epa(rng, basis, length=None):
    """Random product of palindromic generator symbols."""
    n = basis.n
    e = identity_endo(basis)
    for _ in range(length if length is not None else rng.randint(1, 5)):
        kind = rng.random()
        if kind < 0.5 or n < 2 or basis.k < 3:
            i, j = rng.sample(range(1, n + 1), 2)
            e = compose(e, make_generator(mu(i, j, rng.choice([1, -1])), basis))
        elif kind < 0.75:
            a, b = rng.sample(range(1, n + 1), 2)
            e = compose(e, make_generator(phi2(a, b, rng.randint(1, n)), basis))
        else:
            a, b = rng.sample(range(1, n + 1), 2)
            c = rng.randint(1, n)
            e = compose(e, make_generator(phi3(a, b, c, rng.randint(1, n)), basis))
    return e


# -- endomorphism basics ------------------------------------------------------

def test_make_endo_examples():
    basis = hall_basis(2, 2)
    assert make_endo(basis, ["x1", "x2"]) == identity_endo(basis)
    m12 = make_endo(basis, ["x2 x1 x2", "x2"])
    assert m12 == make_generator(mu(1, 2), basis)
    e = make_endo(basis, ["x1 x1", "x2"])
    assert e.abel_matrix == ((2, 0), (0, 1))
    with pytest.raises(ValueError):
        make_endo(basis, ["x1"])


def test_apply_and_compose():
    basis = hall_basis(2, 2)
    m12 = make_generator(mu(1, 2), basis)
    g = collect(parse_word("x1", 2), basis)
    assert m12.apply(g) == collect(parse_word("x2 x1 x2", 2), basis)
    assert identity_endo(basis).apply(g) == g
    t1 = make_generator(t(1), basis)
    assert compose(t1, t1) == identity_endo(basis)


def test_compose_is_left_to_right():
    rng = random.Random(30)
    basis = hall_basis(3, 2)
    for _ in range(30):
        e1, e2 = rand_epa(rng, basis), rand_epa(rng, basis)
        e12 = compose(e1, e2)
        g = collect(rand_word(rng, 3), basis)
        assert e12.apply(g) == e2.apply(e1.apply(g))
        # row convention: matrix of the composition is the ordered product
        m = [[sum(e1.abel_matrix[i][t_] * e2.abel_matrix[t_][j] for t_ in range(3))
              for j in range(3)] for i in range(3)]
        assert tuple(tuple(r) for r in m) == e12.abel_matrix


def test_apply_is_homomorphism():
    rng = random.Random(31)
    for _ in range(30):
        n, k = rng.randint(2, 3), rng.randint(1, 4)
        basis = hall_basis(n, k)
        e = make_endo(basis, [collect(rand_word(rng, n), basis) for _ in range(n)])
        g = collect(rand_word(rng, n), basis)
        h = collect(rand_word(rng, n), basis)
        assert e.apply(multiply(g, h)) == multiply(e.apply(g), e.apply(h))


def test_is_automorphism():
    basis = hall_basis(2, 2)
    assert is_automorphism(identity_endo(basis))
    assert not is_automorphism(make_endo(basis, ["x1 x1", "x2"]))
    m12 = make_generator(mu(1, 2), basis)
    assert is_automorphism(m12)
    assert m12.abel_matrix == ((1, 2), (0, 1))


# -- generators ----------------------------------------------------------------

def test_generator_images():
    basis = hall_basis(2, 3)
    g = make_generator(phi2(2, 1, 1), basis)
    want = collect(parse_word("x1 [x2,x1,x1] [x2,x1,x1] [x2,x1,x2]", 2), basis)
    assert g.images[0] == want
    assert g.images[1] == basis.generator(2)

    s = make_generator(sigma((2, 1)), basis)
    assert s.images[0] == basis.generator(2)

    # psi squared inverts the matching phi3 generator
    p = make_generator(psi(1, 2), basis)
    assert compose(p, p) == inverse(make_generator(phi3(2, 1, 1, 2), basis))


def test_generator_constraints():
    basis = hall_basis(2, 2)
    with pytest.raises(ValueError):
        make_generator(mu(1, 1), basis)
    with pytest.raises(ValueError):
        make_generator(phi2(1, 1, 2), basis)
    with pytest.raises(ValueError):
        make_generator(alpha(2), basis)
    with pytest.raises(ValueError):
        make_generator(sigma((1, 1)), basis)
    with pytest.raises(ValueError):
        make_generator(psi(2, 2), basis)


def test_inner_generator():
    basis = hall_basis(2, 3)
    g = collect(parse_word("x1 x2", 2), basis)
    e = make_generator(inner(g), basis)
    for i in (1, 2):
        assert e.images[i - 1] == multiply(multiply(invert(g), basis.generator(i)), g)
    assert classify(e).is_central is False  # conjugation by weight-1 element


def test_render_symbols():
    assert render_symbol(phi2(2, 1, 1, 3)) == "phi2(2,1;1)^3"
    assert render_symbol(mu(1, 2, -1)) == "mu(1,2)^-1"
    assert render_symbol(sigma((2, 1, 3))) == "sigma(2 1 3)"
    basis = hall_basis(2, 2)
    c = power(collect(parse_word("[x1,x2]", 2), basis), 2)
    assert render_symbol(inner(c)) == "inner([x2,x1]^-2)"


# -- solve_conjugator -----------------------------------------------------------

def test_solve_conjugator_examples():
    b22 = hall_basis(2, 2)
    q = solve_conjugator(collect(parse_word("x2 x1 x2", 2), b22), 1)
    assert q == b22.generator(2)

    g = multiply(b22.generator(1), b22.from_exponents((0, 0, 1)))
    assert solve_conjugator(g, 1) is None

    b23 = hall_basis(2, 3)
    g = multiply(b23.generator(1), b23.from_exponents((0, 0, 0, 2, 0)))
    q = solve_conjugator(g, 1)
    assert q == b23.from_exponents((0, 0, 0, 1, 0))
    assert solve_conjugator(g, 1, min_weight=3) == q


def test_solve_conjugator_round_trip_random():
    rng = random.Random(32)
    for _ in range(120):
        n, k = rng.randint(1, 3), rng.randint(1, 3)
        basis = hall_basis(n, k)
        q = collect(rand_word(rng, n), basis)
        i = rng.randint(1, n)
        g = multiply(multiply(bar(q), basis.generator(i)), q)
        found = solve_conjugator(g, i)
        assert found is not None
        assert multiply(multiply(bar(found), basis.generator(i)), found) == g


def test_solve_conjugator_k4_raises():
    basis = hall_basis(2, 4)
    with pytest.raises(UndecidedError):
        solve_conjugator(basis.generator(1), 1)


def test_solve_conjugator_min_weight():
    basis = hall_basis(2, 3)
    g = collect(parse_word("x2 x1 x2", 2), basis)
    assert solve_conjugator(g, 1, min_weight=1) is not None
    assert solve_conjugator(g, 1, min_weight=2) is None


# -- inverse ---------------------------------------------------------------------

def test_inverse_examples():
    basis = hall_basis(2, 2)
    assert inverse(identity_endo(basis)) == identity_endo(basis)
    m12 = make_generator(mu(1, 2), basis)
    assert compose(m12, inverse(m12)) == identity_endo(basis)
    with pytest.raises(NotAutomorphismError):
        inverse(make_endo(basis, ["x1 x1", "x2"]))


def test_inverse_round_trip_epa():
    rng = random.Random(33)
    for _ in range(60):
        n, k = rng.randint(2, 4), rng.randint(1, 3)
        basis = hall_basis(n, k)
        e = rand_epa(rng, basis)
        inv, factors = inverse_with_factors(e)
        assert compose(e, inv) == identity_endo(basis)
        assert compose(inv, e) == identity_endo(basis)
        assert len(factors) == k
        for f in factors:
            assert palindromic_witnesses(f) is not None


def test_inverse_general_route():
    rng = random.Random(34)
    for _ in range(30):
        n, k = rng.randint(2, 3), rng.randint(1, 5)
        basis = hall_basis(n, k)
        e = identity_endo(basis)
        for _ in range(rng.randint(1, 4)):
            which = rng.random()
            if which < 0.4:
                e = compose(e, make_generator(t(rng.randint(1, n)), basis))
            elif which < 0.7:
                e = compose(e, make_generator(alpha(rng.randint(1, n - 1)), basis))
            else:
                i, j = rng.sample(range(1, n + 1), 2)
                e = compose(e, make_generator(mu(i, j), basis))
        inv = inverse(e)
        assert compose(e, inv) == identity_endo(basis)
        assert compose(inv, e) == identity_endo(basis)


# -- classify ---------------------------------------------------------------------

def test_classify_mu():
    basis = hall_basis(2, 2)
    flags = classify(make_generator(mu(1, 2), basis))
    assert flags.is_elementary_palindromic and flags.is_palindromic
    assert not flags.is_ia
    assert flags.pi_level == 1


def test_classify_pi_element():
    basis = hall_basis(2, 3)
    e = make_endo(basis, ["x1 [x2,x1,x1]^2", "x2"])
    flags = classify(e)
    assert flags.is_elementary_palindromic and flags.is_ia
    assert flags.pi_level >= 2


def test_classify_palindromic_with_swap():
    basis = hall_basis(2, 2)
    e = compose(make_generator(alpha(1), basis), make_generator(mu(1, 2), basis))
    flags = classify(e)
    assert flags.is_palindromic and not flags.is_elementary_palindromic


def test_classify_negative_and_undecided():
    basis = hall_basis(2, 2)
    flags = classify(make_endo(basis, ["x1 x2", "x2"]))
    assert not flags.is_palindromic and not flags.is_elementary_palindromic
    b4 = hall_basis(2, 4)
    flags = classify(identity_endo(b4))
    assert flags.is_elementary_palindromic is None
    assert flags.is_ia and flags.is_central
    assert any("undecided" in note for note in flags.notes)


def test_classify_identity_levels():
    basis = hall_basis(2, 3)
    flags = classify(identity_endo(basis))
    assert flags.is_ia and flags.is_central
    assert flags.pi_level == 3


def test_parity_without_witness_is_flagged():
    basis = hall_basis(2, 2)
    e = make_endo(basis, ["x1 [x2,x1]", "x2"])
    flags = classify(e)
    assert not flags.is_elementary_palindromic
    assert flags.notes  # parity holds, witness impossible


# -- central decomposition ---------------------------------------------------------

def test_decompose_central_examples():
    basis = hall_basis(2, 3)
    dec = decompose_central(identity_endo(basis))
    assert dec.residual_trivial and dec.factors == ()

    e = compose_symbols([phi2(2, 1, 1), phi3(2, 1, 2, 2)], basis)
    dec = decompose_central(e)
    assert dec.residual_trivial
    assert dec.compose(basis) == e

    odd = make_endo(basis, ["x1 [x2,x1,x1]", "x2"])
    dec = decompose_central(odd)
    assert not dec.residual_trivial
    assert dec.diagnostics


def test_decompose_central_round_trip_random():
    rng = random.Random(35)
    for _ in range(60):
        n = rng.randint(2, 3)
        basis = hall_basis(n, 3)
        syms = []
        for _ in range(rng.randint(0, 5)):
            a, b = rng.sample(range(1, n + 1), 2)
            if b > a:
                a, b = b, a
            if rng.random() < 0.5:
                syms.append(phi2(a, b, rng.randint(1, n), rng.randint(-2, 2)))
            else:
                syms.append(phi3(a, b, rng.randint(b, n), rng.randint(1, n),
                                 rng.randint(-2, 2)))
        e = compose_symbols(syms, basis)
        dec = decompose_central(e)
        assert dec.residual_trivial
        assert dec.compose(basis) == e


def test_decompose_central_requires_central():
    basis = hall_basis(2, 3)
    with pytest.raises(PreconditionError):
        decompose_central(make_generator(mu(1, 2), basis))


def test_quotient_rank():
    assert quotient_rank_q(2) == 1
    assert quotient_rank_q(3) == 5
    assert quotient_rank_q(4) == 14
    with pytest.raises(ValueError):
        quotient_rank_q(1)


# -- tameness -----------------------------------------------------------------------

def test_tameness_phi2_classification():
    for n in (2, 3, 4):
        basis = hall_basis(n, 3)
        for a, b in permutations(range(1, n + 1), 2):
            for i in range(1, n + 1):
                e = make_generator(phi2(a, b, i), basis)
                assert tameness_necessary(e) == (i not in (a, b))


def test_tameness_phi3_classification():
    for n in (2, 3, 4):
        basis = hall_basis(n, 3)
        for a, b in permutations(range(1, n + 1), 2):
            for c in range(1, n + 1):
                for i in range(1, n + 1):
                    e = make_generator(phi3(a, b, c, i), basis)
                    want = i not in (a, b, c) or (c == i and i not in (a, b))
                    assert tameness_necessary(e) == want


def test_tameness_residue_values():
    basis = hall_basis(3, 3)
    r = tameness_residue(make_generator(phi2(1, 2, 1), basis))  # a == i
    assert r.pair(1, 2) == 2 and r.pair(2, 2) == 1
    r = tameness_residue(make_generator(phi2(2, 1, 1), basis))  # b == i
    assert r.pair(1, 2) == -2 and r.pair(2, 2) == -1


def test_tameness_requires_central():
    basis = hall_basis(2, 3)
    with pytest.raises(PreconditionError):
        tameness_necessary(make_generator(mu(1, 2), basis))


def test_tame_factorizations():
    b33 = hall_basis(3, 3)
    assert verify_tame_factorization("identity", b33)
    assert verify_tame_factorization("phi2", b33)
    assert verify_tame_factorization("phi3", b33)
    b43 = hall_basis(4, 3)
    for idx in permutations(range(1, 5), 3):
        assert verify_tame_factorization("phi2", b43, idx)
        assert verify_tame_factorization("phi3", b43, idx)


# -- obstruction-free decomposition ---------------------------------------------------

def test_decompose_bglm_n2():
    basis = hall_basis(2, 3)
    gen = compose_symbols([phi3(2, 1, 1, 1), phi3(2, 1, 2, 2)], basis)
    conj = make_generator(
        inner(power(collect(parse_word("[x1,x2]", 2), basis), 2)), basis
    )
    assert gen == conj
    for m in (-2, -1, 0, 1, 2, 3):
        e = endo_power(gen, m)
        dec = decompose_bglm(e)
        assert dec.residual_trivial
        assert dec.compose(basis) == e


def test_decompose_bglm_n3_round_trip():
    rng = random.Random(36)
    basis = hall_basis(3, 3)
    for _ in range(40):
        syms = []
        for _ in range(rng.randint(0, 6)):
            fam = rng.randrange(4)
            trio = rng.sample(range(1, 4), 3)
            m = rng.randint(-2, 2)
            if fam == 0:
                syms.append(phi2(trio[0], trio[1], trio[2], m))
            elif fam == 1:
                syms.append(phi3(trio[0], trio[1], trio[2], trio[2], m))
            elif fam == 2:
                syms.extend([psi(trio[0], trio[1], m), psi(trio[0], trio[2], -m)])
            else:
                k_, u, v = trio
                syms.extend([phi3(k_, u, v, k_, m), phi3(v, u, u, u, m)])
        e = compose_symbols(syms, basis)
        dec = decompose_bglm(e)
        assert dec.residual_trivial
        assert dec.compose(basis) == e


def test_decompose_bglm_rejects_obstructed():
    basis = hall_basis(2, 3)
    e = make_generator(phi2(2, 1, 1), basis)  # b == i: obstruction nonzero
    with pytest.raises(PreconditionError):
        decompose_bglm(e)


# -- files ------------------------------------------------------------------------------

def test_endo_file_round_trip():
    basis = hall_basis(2, 3)
    text = "# comment\nx1 -> x2 x1 x2\nx2 -> x2\n"
    e = parse_endo_file(text, basis)
    assert e == make_generator(mu(1, 2), basis)
    again = parse_endo_file(render_endo(e), basis)
    assert again == e


def test_endo_file_defaults_and_errors():
    basis = hall_basis(2, 2)
    assert parse_endo_file("", basis) == identity_endo(basis)
    with pytest.raises(ValueError):
        parse_endo_file("x1 -> x1\nx1 -> x2", basis)
    with pytest.raises(ValueError):
        parse_endo_file("x9 -> x1", basis)
    with pytest.raises(ValueError):
        parse_endo_file("x1 = x1", basis)


# -- further structural properties --------------------------------------------

def test_abelian_rigidity_pointwise_witnesses():
    # on the abelian quotient every parity-compatible diagonal map has
    # pointwise witnesses; the solver must find them
    basis = hall_basis(3, 1)
    e = make_endo(basis, [invert(basis.generator(1)), invert(basis.generator(2)),
                          basis.generator(3)])
    flags = classify(e)
    assert flags.is_elementary_palindromic
    assert solve_conjugator(e.images[0], 1) == invert(basis.generator(1))


def test_even_step4_bounded_witness_search():
    # reduced-scale brute force at step 4: no witness with zero
    # abelianization produces a nontrivial central defect (witnesses with
    # nonzero abelianization cannot, since the value's weight-1 part moves)
    basis = hall_basis(2, 4)
    nelem = len(basis.elements)
    from itertools import product as iproduct

    hits = []
    for i in (1, 2):
        xi = basis.generator(i)
        for tail in iproduct((-1, 0, 1), repeat=nelem - 2):
            q = basis.from_exponents((0, 0) + tail)
            g = multiply(multiply(bar(q), xi), q)
            defect = multiply(invert(xi), g)
            if not defect.is_identity() and weight(defect) >= 4:
                hits.append((i, tail))
    assert hits == []


def test_lemma41_restated():
    # triviality of w x1 bar(w) x1^-1 modulo the weight-3 layer forces a
    # trivial abelianization for w
    rng = random.Random(40)
    basis = hall_basis(2, 3)
    for _ in range(150):
        w = collect(rand_word(rng, 2, 8), basis)
        value = multiply(multiply(multiply(w, basis.generator(1)), bar(w)),
                         invert(basis.generator(1)))
        trivial_mod_gamma3 = value.is_identity() or weight(value) >= 3
        if trivial_mod_gamma3:
            assert w.abelianization() == (0, 0)
        if w.abelianization() != (0, 0):
            assert not trivial_mod_gamma3


def test_mismatched_bases_raise():
    b2 = hall_basis(2, 2)
    b3 = hall_basis(2, 3)
    with pytest.raises(ValueError):
        multiply(b2.generator(1), b3.generator(1))
    with pytest.raises(ValueError):
        compose(identity_endo(b2), identity_endo(b3))
    with pytest.raises(ValueError):
        identity_endo(b2).apply(b3.generator(1))


def test_tameness_residue_lift_independent():
    basis = hall_basis(3, 3)
    e = make_generator(phi2(1, 2, 1), basis)
    defect = multiply(invert(basis.generator(1)), e.images[0])
    lift = element_as_word(defect)
    # a different free preimage: pad with a weight-4 commutator word
    pad = parse_word("[[x2,x1,x1],x1]", 3)
    from nilpal.foxring import bglm_residue
    one = parse_word("1", 3)
    assert bglm_residue([lift, one, one]) == bglm_residue([lift * pad, one, one])


def test_doubled_central_normal_instance_is_palindromic():
    # x_i -> x_i [x_i, x_1, x_1]^2 simultaneously for every i
    for n in (2, 3):
        basis = hall_basis(n, 3)
        images = []
        for i in range(1, n + 1):
            xi = basis.generator(i)
            if i == 1:
                images.append(xi)
            else:
                from nilpal.nilpotent import left_normed

                c = left_normed([xi, basis.generator(1), basis.generator(1)])
                images.append(multiply(xi, power(c, 2)))
        flags = classify(Endo(basis, images))
        assert flags.is_elementary_palindromic
        assert flags.is_ia and flags.is_central
