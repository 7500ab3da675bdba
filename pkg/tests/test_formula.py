import math
import random
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from pometh.errors import FormulaSyntaxError
from pometh.formula import (
    A,
    And,
    Cmp,
    E,
    Finally,
    Globally,
    Implies,
    K,
    MixedTimeAtom,
    Not,
    Or,
    Polynomial,
    Pr,
    PrAgentAt,
    PrAt,
    Prior,
    Prop,
    TrueF,
    Until,
    X,
    agents,
    props,
)
from pometh.parser import parse_formula, show
from pometh.rewrites import dependence_horizon
from pometh.samples import FormulaConfig, random_formula

p, q = Prop("p"), Prop("q")


def pr(arg, agent="i"):
    return Polynomial.of(Pr(agent, arg))


def test_spec_examples():
    assert parse_formula("EF<=5 (Pr[i](p) > 1/2)") == E(Finally(Cmp(pr(p), ">", Fraction(1, 2)), 5))
    atom = parse_formula("exists t1 . 1*Pr(p2@t1) - 1/2 = 0")
    assert atom == MixedTimeAtom(("t1",), Polynomial.of(PrAt("p2", "t1")) - Polynomial.const(Fraction(1, 2)), "=", 0)
    assert parse_formula("K[i] F !q") == K("i", Finally(Not(q)))


def test_precedence():
    assert parse_formula("!p & q | p -> q") == Implies(Or(And(Not(p), q), p), q)
    assert parse_formula("p -> q -> p") == Implies(p, Implies(q, p))
    assert parse_formula("X p U q") == Until(X(p), q)
    assert parse_formula("p U<=3 X q") == Until(p, X(q), 3)
    assert parse_formula("AG<=2 p") == A(Globally(p, 2))
    assert parse_formula("E(p U q)") == E(Until(p, q))


def test_polynomial_forms():
    f = parse_formula("2*Pr[i](p)^2 - Pr[i](p)*Pr[j](q) + Prior[i](true) >= -1/3")
    assert isinstance(f, Cmp) and f.rhs == Fraction(-1, 3)
    assert f.poly.degree() == 2
    assert set(f.poly.terms()) == {Pr("i", p), Pr("j", q), Prior("i", TrueF())}
    agent_at = parse_formula("exists t . Pr[i,t](p & q) > 0")
    assert agent_at.poly.terms() == [PrAgentAt("i", "t", And(p, q))]


def test_polynomials_are_canonical():
    a, b = Pr("i", p), Pr("i", q)
    x = Polynomial.of(a) * Polynomial.of(b) + Polynomial.of(b) * Polynomial.of(a)
    y = (Polynomial.of(a) * Polynomial.of(b)).scale(2)
    assert x == y
    assert Polynomial.of(a) - Polynomial.of(a) == Polynomial()
    assert parse_formula("Pr[i](p) + Pr[i](q) > 0") == parse_formula("Pr[i](q) + Pr[i](p) > 0")


@pytest.mark.parametrize(
    "text, fragment",
    [
        ("p &", "column"),
        ("exists t . Pr(p@s) = 0", "time variable"),
        ("F<=99999999 p", "bound"),
        ("Pr(p@t) = 0", "time variable"),
        ("exists t . Pr[i](p) = 0", "time"),
        ("p $ q", "unexpected character"),
    ],
)
def test_syntax_errors(text, fragment):
    with pytest.raises(FormulaSyntaxError, match=fragment):
        parse_formula(text)


def test_error_shows_caret():
    with pytest.raises(FormulaSyntaxError) as info:
        parse_formula("p & & q")
    assert "^" in str(info.value)


def test_dependence_horizon_examples():
    assert dependence_horizon(p) == 0
    assert dependence_horizon(parse_formula("X X p")) == 2
    assert dependence_horizon(parse_formula("p U<=3 (X q)")) == 4
    assert dependence_horizon(parse_formula("K[i] X Pr[i](X p) > 0")) == 2
    assert dependence_horizon(parse_formula("E G p")) == math.inf


def test_collectors():
    f = parse_formula("K[i](p) & Pr[j](X q) > 0")
    assert props(f) == {"p", "q"} and agents(f) == {"i", "j"}


@given(st.integers(0, 10**6), st.booleans())
def test_print_parse_round_trip(seed, ctlpk):
    f = random_formula(random.Random(seed), FormulaConfig(depth=4, agents=("i", "j"), ctlpk=ctlpk))
    assert parse_formula(show(f)) == f


def test_mixed_round_trip():
    text = "exists t1 t2 . 3*Pr(p@t1)^2 - 1/2*Pr(q@t2)*Pr[i,t1](p) < 1"
    atom = parse_formula(text)
    assert parse_formula(show(atom)) == atom
