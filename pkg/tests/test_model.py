import random
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from pometh.errors import EnumerationLimitError, InvalidPathError, ModelError
from pometh.linalg import ONE, is_distribution
from pometh.model import (
    PFA,
    add_blind_agent,
    cylinder_measure,
    enum_paths,
    format_model,
    format_pfa,
    index_paths,
    iter_index_paths,
    parse_model,
    parse_pfa,
    time_distribution,
)
from pometh.reductions import HILBERT_A
from pometh.samples import random_model, random_pfa

seeds = st.integers(0, 10**6)

TWO_STATE = """
# comment line
states: s0 s1
init: s0=1
trans: s0 -> s0 : 1/2
trans: s0 -> s1 : 1/2   # trailing comment
trans: s1 -> s1 : 1
obs i: s0=a s1=b
label p: s1
"""


def test_parse_two_state():
    m = parse_model(TWO_STATE)
    assert m.trans == ((Fraction(1, 2), Fraction(1, 2)), (0, 1))
    assert m.label("p") == frozenset({1})
    assert m.observation("i", 1) == "b"


def test_init_must_sum_to_one():
    text = TWO_STATE.replace("init: s0=1", "init: s0=3/4")
    with pytest.raises(ModelError, match="init not a distribution"):
        parse_model(text)


def test_non_stochastic_row_reports_the_row():
    text = TWO_STATE.replace("s0 -> s1 : 1/2", "s0 -> s1 : 1/3")
    with pytest.raises(ModelError, match="trans row s0") as info:
        parse_model(text)
    assert "line" in str(info.value)


@pytest.mark.parametrize(
    "edit, message",
    [
        (("states: s0 s1", "states: s0 s0"), "duplicate state"),
        (("obs i: s0=a s1=b", "obs i: s0=a"), "missing observation"),
        (("label p: s1", "label p: s9"), "unknown state"),
        (("init: s0=1", "init: s0=x"), "rational"),
        (("init: s0=1", "init: s0=0.5 s1=0.5"), "rational"),
    ],
)
def test_parse_errors(edit, message):
    with pytest.raises(ModelError, match=message):
        parse_model(TWO_STATE.replace(*edit))


def test_parse_error_has_column():
    with pytest.raises(ModelError) as info:
        parse_model(TWO_STATE.replace("init: s0=1", "init: s0=x"))
    assert info.value.line == 4 and info.value.column is not None


def test_hilbert_file_matches_matrix(hilbert):
    assert parse_model(format_model(hilbert)).trans == HILBERT_A


def test_enum_paths_small_cases(cycle, fig):
    assert enum_paths(fig, 0) == [("s",)]
    assert enum_paths(cycle, 2) == [("s0", "s1", "s0")]


def test_hilbert_horizon_one_path_count(hilbert):
    # every state starts with mass 1/4 and PT has 2 + 3 + 3 + 1 nonzero entries
    assert len(enum_paths(hilbert, 1)) == 9


def test_cylinder_measures(hilbert, fig):
    assert cylinder_measure(fig, ["s"]) == 1
    assert cylinder_measure(hilbert, ["s4", "s4"]) == Fraction(1, 4)
    with pytest.raises(InvalidPathError):
        cylinder_measure(fig, ["u"])
    with pytest.raises(InvalidPathError):
        cylinder_measure(fig, ["s", "u", "s"])


def test_time_distribution_examples(hilbert, fig):
    assert time_distribution(fig, 0) == fig.init
    assert time_distribution(hilbert, 1) == tuple(Fraction(x, 48) for x in (13, 10, 4, 21))
    for t in range(17):
        v = time_distribution(hilbert, t)
        assert Fraction(4, 3) * v[1] + Fraction(8, 3) * v[2] == Fraction(1, 2) ** t


def test_zero_initial_states_are_not_path_starts():
    m = parse_model("states: a b\ninit: a=1 b=0\ntrans: a -> b : 1\ntrans: b -> b : 1\n")
    assert enum_paths(m, 1) == [("a", "b")]


def test_enumeration_guard(monkeypatch, hilbert):
    monkeypatch.setenv("POMETH_MAX_PATHS", "5")
    with pytest.raises(EnumerationLimitError):
        enum_paths(hilbert, 1)


def test_blind_agent(fig):
    with pytest.raises(ValueError):
        add_blind_agent(fig, "i")
    m = add_blind_agent(fig, "z")
    assert set(m.obs["z"]) == {"⊥"}


@given(seeds, st.integers(0, 6))
def test_path_measures_sum_to_one(seed, h):
    m = random_model(random.Random(seed))
    paths = enum_paths(m, h)
    assert sum(cylinder_measure(m, p) for p in paths) == ONE
    assert [tuple(m.states[i] for i in p) for p in iter_index_paths(m, h)] == paths
    assert paths == sorted(paths, key=lambda p: [m.index(s) for s in p])


@given(seeds)
def test_time_distributions_stay_distributions(seed):
    m = random_model(random.Random(seed))
    for t in (0, 1, 7, 64):
        assert is_distribution(time_distribution(m, t))


@given(seeds)
def test_time_distribution_matches_path_sums(seed):
    m = random_model(random.Random(seed))
    for h in range(4):
        acc = [Fraction(0)] * m.size
        for p in index_paths(m, h):
            acc[p[-1]] += cylinder_measure(m, [m.states[i] for i in p])
        assert tuple(acc) == time_distribution(m, h)


@given(seeds)
def test_model_round_trip(seed):
    m = random_model(random.Random(seed))
    assert parse_model(format_model(m)) == m


@given(seeds)
def test_pfa_round_trip(seed):
    a = random_pfa(random.Random(seed))
    assert parse_pfa(format_pfa(a)) == a


def test_pfa_validation():
    half = Fraction(1, 2)
    ok = dict(states=("q",), alphabet=("a",), init=(ONE,), letters={"a": ((ONE,),)}, finals=frozenset(), cutpoint=half)
    PFA(**ok)
    with pytest.raises(ModelError):
        PFA(**{**ok, "cutpoint": ONE})
    with pytest.raises(ModelError):
        PFA(**{**ok, "letters": {"a": ((half,),)}})
