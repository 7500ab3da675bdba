"""Random instances for property tests and experiment scripts.

All generators take a :class:`random.Random` so runs are reproducible from a seed.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction

from .formula import A, And, Cmp, E, Finally, Formula, Globally, Implies, K, Not, Or, Polynomial, Pr, Prop, TrueF, Until, X
from .model import PFA, PODTMC
from .reductions import LRS, DiophantinePoly


@dataclass(frozen=True)
class ModelConfig:
    max_states: int = 4
    agents: tuple[str, ...] = ("i",)
    symbols: tuple[str, ...] = ("a", "b")
    props: tuple[str, ...] = ("p", "q")
    max_weight: int = 3


def random_distribution(rng: random.Random, n: int, max_weight: int = 3, min_support: int = 1) -> list[Fraction]:
    support = rng.sample(range(n), rng.randint(min_support, n))
    weights = [0] * n
    for s in support:
        weights[s] = rng.randint(1, max_weight)
    total = sum(weights)
    return [Fraction(w, total) for w in weights]


def random_model(rng: random.Random, cfg: ModelConfig = ModelConfig(), n_states: int | None = None) -> PODTMC:
    n = n_states or rng.randint(1, cfg.max_states)
    states = [f"s{k}" for k in range(n)]
    init = dict(zip(states, random_distribution(rng, n, cfg.max_weight)))
    trans = {}
    for s in states:
        for t, p in zip(states, random_distribution(rng, n, cfg.max_weight)):
            if p:
                trans[(s, t)] = p
    obs = {a: {s: rng.choice(cfg.symbols) for s in states} for a in cfg.agents}
    labels = {p: [s for s in states if rng.random() < 0.5] for p in cfg.props}
    return PODTMC.build(states, init, trans, obs, labels)


def random_pfa(rng: random.Random, max_states: int = 3, max_letters: int = 2) -> PFA:
    n = rng.randint(1, max_states)
    letters = ("a", "b")[: rng.randint(1, max_letters)]
    states = tuple(f"q{k}" for k in range(n))
    mats = {x: tuple(tuple(random_distribution(rng, n)) for _ in range(n)) for x in letters}
    finals = frozenset(q for q in range(n) if rng.random() < 0.5)
    cut = Fraction(rng.randint(1, 7), 8)
    return PFA(states, letters, tuple(random_distribution(rng, n)), mats, finals, cut)


@dataclass(frozen=True)
class FormulaConfig:
    depth: int = 3
    props: tuple[str, ...] = ("p", "q")
    agents: tuple[str, ...] = ("i",)
    max_bound: int = 2
    ctlpk: bool = False  # temporal operators only directly under A/E
    knowledge: bool = True
    probability: bool = True


_RELS = ("<", "<=", "=", ">=", ">")
_THRESHOLDS = (Fraction(0), Fraction(1, 3), Fraction(1, 2), Fraction(1))


def random_formula(rng: random.Random, cfg: FormulaConfig = FormulaConfig()) -> Formula:
    """Bounded formula; with ``cfg.ctlpk`` every temporal operator sits right under a path quantifier."""
    return _state(rng, cfg, cfg.depth)


def _state(rng: random.Random, cfg: FormulaConfig, depth: int) -> Formula:
    if depth <= 0:
        return rng.choice([Prop(p) for p in cfg.props] + [TrueF()])
    kinds = ["prop", "not", "and", "or", "imp", "A", "E"]
    if cfg.knowledge:
        kinds.append("K")
    if cfg.probability:
        kinds += ["Pr", "Pr"]
    if not cfg.ctlpk:
        kinds += ["temporal", "temporal"]
    kind = rng.choice(kinds)
    sub = lambda: _state(rng, cfg, depth - 1)  # noqa: E731
    if kind == "prop":
        return Prop(rng.choice(cfg.props))
    if kind == "not":
        return Not(sub())
    if kind in ("and", "or", "imp"):
        return {"and": And, "or": Or, "imp": Implies}[kind](sub(), sub())
    if kind in ("A", "E"):
        arg = _path(rng, cfg, depth - 1) if cfg.ctlpk else sub()
        return (A if kind == "A" else E)(arg)
    if kind == "K":
        return K(rng.choice(cfg.agents), sub())
    if kind == "Pr":
        return Cmp(Polynomial.of(Pr(rng.choice(cfg.agents), sub())), rng.choice(_RELS), rng.choice(_THRESHOLDS))
    return _path(rng, cfg, depth - 1)


def _path(rng: random.Random, cfg: FormulaConfig, depth: int) -> Formula:
    sub = lambda: _state(rng, cfg, depth - 1)  # noqa: E731
    b = rng.randint(0, cfg.max_bound)
    kind = rng.choice(["X", "F", "G", "U", "state"])
    if kind == "X":
        return X(sub())
    if kind == "F":
        return Finally(sub(), b)
    if kind == "G":
        return Globally(sub(), b)
    if kind == "U":
        return Until(sub(), sub(), b)
    return sub()


def random_lrs(rng: random.Random, max_order: int = 3, span: int = 3) -> LRS:
    k = rng.randint(1, max_order)
    coeffs = [rng.randint(-span, span) for _ in range(k)]
    if coeffs[-1] == 0:
        coeffs[-1] = rng.choice([-1, 1])
    return LRS(tuple(coeffs), tuple(rng.randint(-span, span) for _ in range(k)))


def random_integer_matrix(rng: random.Random, max_size: int = 3, span: int = 3) -> tuple[tuple[int, ...], ...]:
    k = rng.randint(1, max_size)
    return tuple(tuple(rng.randint(-span, span) for _ in range(k)) for _ in range(k))


def random_dioph(rng: random.Random, max_vars: int = 3, max_degree: int = 2, span: int = 5) -> DiophantinePoly:
    k = rng.randint(1, max_vars)
    monos = []
    for _ in range(rng.randint(1, 4)):
        exps = [0] * k
        for _ in range(rng.randint(0, max_degree)):
            exps[rng.randrange(k)] += 1
        monos.append((rng.choice([c for c in range(-span, span + 1) if c]), tuple(exps)))
    return DiophantinePoly(tuple(f"n{j}" for j in range(1, k + 1)), tuple(monos))
