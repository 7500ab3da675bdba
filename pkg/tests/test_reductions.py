import itertools
import random
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from pometh.belief import SPR, ObsRecord, cell_partition_measures, spr_filter
from pometh.checker import HOLDS, check, time_term_table, witness_assignments, witness_search
from pometh.linalg import ONE, bilinear, is_distribution, is_stochastic, mat_pow, matrix, vec_mat, zeros
from pometh.model import PFA
from pometh.reductions import (
    HILBERT_A,
    HILBERT_F,
    HILBERT_G,
    HILBERT_G1,
    HILBERT_G2,
    LRS,
    DiophantinePoly,
    _weight,
    best_word,
    dioph_to_atom,
    integer_matrix_to_stochastic,
    lrs_term,
    lrs_terms,
    lrs_to_matrix,
    minimal_polynomial_value,
    parse_dioph,
    perron_power,
    pfa_accept_weight,
    pfa_to_podtmc,
    skolem_instance,
    skolem_matrix,
)
from pometh.samples import random_dioph, random_integer_matrix, random_lrs, random_pfa

seeds = st.integers(0, 10**6)
HALF = Fraction(1, 2)


def tiny_pfa(finals=frozenset({1})):
    return PFA(("q0", "q1"), ("a",), (ONE, Fraction(0)), {"a": ((HALF, HALF), (0, ONE))}, finals, HALF)


# -- PFA ------------------------------------------------------------------------------


def test_tiny_pfa_weights():
    a = tiny_pfa()
    assert pfa_accept_weight(a, "a") == HALF
    assert pfa_accept_weight(a, "aa") == Fraction(3, 4)
    with pytest.raises(ValueError):
        pfa_accept_weight(a, "")
    with pytest.raises(ValueError):
        pfa_accept_weight(a, "b")


def test_all_final_accepts_everything():
    a = tiny_pfa(frozenset({0, 1}))
    assert all(pfa_accept_weight(a, "a" * n) == 1 for n in range(1, 6))


def test_tiny_pfa_reduction():
    a = tiny_pfa()
    for h, kind in ((1, "FAILS"), (2, "HOLDS"), (3, "HOLDS")):
        m, phi = pfa_to_podtmc(a, h)
        assert check(m, SPR, phi).kind == kind


@given(seeds)
def test_reduction_model_is_valid_and_filters_like_the_automaton(seed):
    rng = random.Random(seed)
    a = random_pfa(rng)
    m, _ = pfa_to_podtmc(a)
    assert is_distribution(m.init) and is_stochastic(m.trans)
    n = len(a.alphabet)
    for length in range(4):
        for word in itertools.product(a.alphabet, repeat=length):
            first = rng.choice(a.alphabet)
            bel = spr_filter(m, ObsRecord.spr("i", (first,) + word))
            assert bel.cell_measure == Fraction(1, n ** (length + 1))
            v = a.init
            for x in word:
                v = vec_mat(v, a.letters[x])
            # belief over (q, last letter) collapses to the automaton's state vector
            collapsed = [sum(bel.dist[m.index(f"{q}.{x}")] for x in a.alphabet) for q in a.states]
            assert tuple(collapsed) == v


@given(seeds, st.integers(0, 3))
def test_equivalence_with_word_enumeration(seed, horizon):
    a = random_pfa(random.Random(seed))
    m, phi = pfa_to_podtmc(a, horizon)
    exists = any(
        _weight(a, w) > a.cutpoint for n in range(horizon + 1) for w in itertools.product(a.alphabet, repeat=n)
    )
    assert (check(m, SPR, phi) == HOLDS) == exists
    assert (best_word(a, horizon)[1] > a.cutpoint) == exists


@given(seeds, st.integers(0, 4))
def test_reduction_cells_are_uniform(seed, t):
    a = random_pfa(random.Random(seed))
    m, _ = pfa_to_podtmc(a)
    n = len(a.alphabet)
    cells = cell_partition_measures(m, "i", SPR, t)
    assert len(cells) == n ** (t + 1)
    assert set(cells.values()) == {Fraction(1, n ** (t + 1))}


# -- the four-state chain -----------------------------------------------------------------


def test_chain_vectors():
    i4 = mat_pow(HILBERT_A, 0)
    half_i = tuple(tuple(HALF * x for x in row) for row in i4)
    a_half = tuple(tuple(x - y for x, y in zip(r, s)) for r, s in zip(HILBERT_A, half_i))
    apply = lambda m, v: tuple(sum(x * y for x, y in zip(row, v)) for row in m)  # noqa: E731
    assert apply(HILBERT_A, HILBERT_G1) == tuple(HALF * x for x in HILBERT_G1)
    assert apply(a_half, apply(a_half, HILBERT_G)) == (0, 0, 0, 0)
    assert tuple(2 * x for x in apply(a_half, HILBERT_G)) == HILBERT_G1
    assert tuple(2 * x + y for x, y in zip(HILBERT_G1, HILBERT_G)) == HILBERT_G2


def test_chain_identities():
    for n in range(65):
        an = mat_pow(HILBERT_A, n)
        scale = HALF**n
        assert bilinear(HILBERT_F, an, HILBERT_G) == scale * (n - 2)
        assert bilinear(HILBERT_F, an, HILBERT_G1) == scale
        assert bilinear(HILBERT_F, an, HILBERT_G2) == scale * n


def test_perron_expansion():
    assert minimal_polynomial_value() == zeros(4, 4)
    for n in range(1, 33):
        assert perron_power(n) == mat_pow(HILBERT_A, n)
    with pytest.raises(ValueError):
        perron_power(0)


def test_chain_model(hilbert):
    assert hilbert.trans == HILBERT_A and hilbert.init == HILBERT_F
    assert set(hilbert.obs["i"]) == {"⊥"}
    assert [hilbert.label(f"p{k}") for k in range(1, 5)] == [frozenset({k}) for k in range(4)]


# -- Diophantine --------------------------------------------------------------------------


def test_parse_dioph():
    p = parse_dioph("p(n1,n2) = 1*n1^1 - 1*n2^1 - 1")
    assert p.variables == ("n1", "n2") and p(3, 2) == 0 and p(1, 1) == -1
    assert parse_dioph("n1 - 2")(2) == 0
    q = parse_dioph("3*x^2*y - y + 7")
    assert q.variables == ("x", "y") and q.degrees == (2, 1) and q(1, 2) == 11
    assert str(parse_dioph(str(q))) == str(q)
    for bad in ("n1 +", "2 ** n", "p(n1) = n2", "n1 ^ x"):
        with pytest.raises(ValueError):
            parse_dioph(bad)


def test_dioph_examples():
    chain, atom = dioph_to_atom(parse_dioph("n1 - 2"))
    assert str(witness_search(chain, atom, 8)) == "WITNESS t1=2"
    chain, atom = dioph_to_atom(parse_dioph("2*n1 - 3"))
    assert str(witness_search(chain, atom, 32)) == "NOWITNESS bound=32"
    chain, atom = dioph_to_atom(parse_dioph("p(n1,n2) = n1 - n2 - 1"))
    assert (3, 2) in set(witness_assignments(chain, atom, 8))


def test_positive_polynomial_has_no_witness():
    p = parse_dioph("n1^2 + 2*n1*n2 + n2 + 1")
    chain, atom = dioph_to_atom(p)
    table = time_term_table(chain, atom, 5)
    for a in itertools.product(range(6), repeat=2):
        env = dict(zip(atom.time_vars, a))
        assert atom.poly.evaluate({t: table[t][env[t.tvar]] for t in table}) > 0
    assert witness_search(chain, atom, 5).kind == "NOWITNESS"


@given(seeds)
def test_encoding_identity(seed):
    p = random_dioph(random.Random(seed))
    chain, atom = dioph_to_atom(p)
    table = time_term_table(chain, atom, 6)
    for a in itertools.product(range(7), repeat=len(p.variables)):
        env = dict(zip(atom.time_vars, a))
        z = atom.poly.evaluate({t: table[t][env[t.tvar]] for t in table})
        assert z == HALF ** sum(d * n for d, n in zip(p.degrees, a)) * p(*a)


# -- recurrences ----------------------------------------------------------------------------


def test_lrs_examples():
    fib = LRS((1, 1), (0, 1))
    assert lrs_term(fib, 10) == 55
    ones = LRS((1,), (1,))
    c, v, w = lrs_to_matrix(ones)
    assert all(bilinear(v, mat_pow(c, n), w) == 1 for n in range(21))
    with pytest.raises(ValueError):
        LRS((1, 0), (0, 1))


@given(seeds)
def test_companion_matrix_matches_recurrence(seed):
    s = random_lrs(random.Random(seed))
    c, v, w = lrs_to_matrix(s)
    terms = lrs_terms(s, 30)
    assert all(bilinear(v, mat_pow(c, n), w) == terms[n] for n in range(31))
    big = skolem_matrix(s)
    assert all(mat_pow(big, n)[0][s.order] == terms[n] for n in range(1, 31))


def _sign(x):
    return (x > 0) - (x < 0)


def test_stochastic_embedding_of_stochastic_and_zero_matrices():
    for a in (((1, 0), (0, 1)), ((0, 1), (1, 0)), ((0, 0), (0, 0))):
        b, v, w, c = integer_matrix_to_stochastic(matrix(a), 0, 1)
        assert is_stochastic(b) and is_distribution(v)
        for n in range(1, 21):
            assert _sign(bilinear(v, mat_pow(b, n), w) - c) == _sign(mat_pow(matrix(a), n)[0][1])


@given(seeds)
def test_stochastic_reduction_preserves_sign(seed):
    rng = random.Random(seed)
    a = matrix(random_integer_matrix(rng))
    i0, j0 = rng.randrange(len(a)), rng.randrange(len(a))
    b, v, w, c = integer_matrix_to_stochastic(a, i0, j0)
    assert is_stochastic(b) and all(0 <= x <= 1 for row in b for x in row)
    assert set(w) <= {0, 1}
    for n in range(1, 21):
        assert _sign(bilinear(v, mat_pow(b, n), w) - c) == _sign(mat_pow(a, n)[i0][j0])


def test_stochastic_reduction_rejects_non_integers():
    with pytest.raises(ValueError):
        integer_matrix_to_stochastic(matrix([[HALF]]), 0, 0)


@pytest.mark.parametrize(
    "coeffs, init, expected",
    [
        ((2, -1), (-3, -2), "WITNESS t=3"),  # u_n = n - 3
        ((2, 0, -1), (-2, -1, -1), "WITNESS t=3"),  # Fibonacci minus 2
        ((1,), (5,), "NOWITNESS bound=32"),
        ((Fraction(1, 2), Fraction(1, 3)), (Fraction(-1, 2), 1), None),
    ],
)
def test_skolem_instances(coeffs, init, expected):
    s = LRS(coeffs, init)
    m, atom = skolem_instance(s)
    bound = 32 if expected and "bound=32" in expected else 10
    v = witness_search(m, atom, bound)
    terms = lrs_terms(s, bound)
    truth = next((n for n in range(1, bound + 1) if terms[n] == 0), None)
    assert (v.kind == "WITNESS") == (truth is not None)
    if truth is not None:
        assert v.assignment == (("t", truth),)
    if expected:
        assert str(v) == expected


@given(seeds)
def test_skolem_search_matches_scan(seed):
    s = random_lrs(random.Random(seed), span=2)
    m, atom = skolem_instance(s)
    terms = lrs_terms(s, 12)
    zeros_ = [n for n in range(1, 13) if terms[n] == 0]
    assert [a[0] for a in witness_assignments(m, atom, 12)] == zeros_


def test_dioph_poly_normalises():
    p = DiophantinePoly(("n",), ((1, (1,)), (2, (1,)), (-3, (1,))))
    assert p.monomials == () and p.degrees == (0,)
