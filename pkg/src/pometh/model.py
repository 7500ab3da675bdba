"""Partially observed DTMCs, probabilistic finite automata, and path measures.

States are named by string ids in files and in every output; internally they
are dense indices in declaration order, and path enumeration follows that
order.
"""

from __future__ import annotations

import os
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Iterator, Mapping, Sequence

from .errors import EnumerationLimitError, InvalidPathError, ModelError
from .linalg import ONE, ZERO, Matrix, Vector, is_distribution, vec_mat

BLIND_SYMBOL = "⊥"
DEFAULT_MAX_PATHS = 10**6

FinitePath = tuple  # tuple[str, ...] of state ids, s_0 ... s_m


def max_paths() -> int:
    """Enumeration guard; ``POMETH_MAX_PATHS`` overrides the default."""
    raw = os.environ.get("POMETH_MAX_PATHS")
    return int(raw) if raw else DEFAULT_MAX_PATHS


def _fmt(x: Fraction) -> str:
    return str(x)


@dataclass(frozen=True, eq=True)
class PODTMC:
    """Finite partially observed Markov chain ``(S, PI, PT, O_1..O_n, pi)``.

    ``obs`` maps each agent to a tuple holding its observation at every state
    index; ``labels`` maps each proposition to the set of state indices where
    it holds.
    """

    states: tuple[str, ...]
    init: Vector
    trans: Matrix
    obs: Mapping[str, tuple[str, ...]] = field(default_factory=dict)
    labels: Mapping[str, frozenset[int]] = field(default_factory=dict)

    def __post_init__(self):
        n = len(self.states)
        if n == 0:
            raise ModelError("model has no states")
        if len(set(self.states)) != n:
            raise ModelError("duplicate state id")
        if len(self.init) != n or len(self.trans) != n or any(len(r) != n for r in self.trans):
            raise ModelError("dimension mismatch between states, init and trans")
        if not is_distribution(self.init):
            raise ModelError(f"init not a distribution (sums to {sum(self.init, ZERO)})")
        for i, row in enumerate(self.trans):
            if not is_distribution(row):
                raise ModelError(f"trans row {self.states[i]} is not stochastic (sums to {sum(row, ZERO)})")
        for agent, o in self.obs.items():
            if len(o) != n:
                raise ModelError(f"missing observation for agent {agent}")
        for prop, ss in self.labels.items():
            if any(not 0 <= s < n for s in ss):
                raise ModelError(f"label {prop} refers to an unknown state")
        object.__setattr__(self, "_index", {s: i for i, s in enumerate(self.states)})
        succ = tuple(tuple(j for j, p in enumerate(row) if p) for row in self.trans)
        object.__setattr__(self, "_succ", succ)

    @classmethod
    def build(
        cls,
        states: Sequence[str],
        init: Mapping[str, object],
        trans: Mapping[tuple[str, str], object],
        obs: Mapping[str, Mapping[str, str]] | None = None,
        labels: Mapping[str, Iterable[str]] | None = None,
    ) -> "PODTMC":
        """Construct from id-keyed dictionaries (missing entries are 0)."""
        states = tuple(states)
        idx = {s: i for i, s in enumerate(states)}
        if len(idx) != len(states):
            raise ModelError("duplicate state id")
        n = len(states)

        def lookup(s):
            if s not in idx:
                raise ModelError(f"unknown state {s!r}")
            return idx[s]

        pi = [ZERO] * n
        for s, p in init.items():
            pi[lookup(s)] = Fraction(p)
        pt = [[ZERO] * n for _ in range(n)]
        for (a, b), p in trans.items():
            pt[lookup(a)][lookup(b)] = Fraction(p)
        o = {}
        for agent, m in (obs or {}).items():
            missing = [s for s in states if s not in m]
            if missing:
                raise ModelError(f"missing observation for agent {agent} at state {missing[0]}")
            for s in m:
                lookup(s)
            o[agent] = tuple(m[s] for s in states)
        lab = {p: frozenset(lookup(s) for s in ss) for p, ss in (labels or {}).items()}
        return cls(states, tuple(pi), tuple(tuple(r) for r in pt), o, lab)

    # -- convenience -------------------------------------------------------
    @property
    def agents(self) -> tuple[str, ...]:
        return tuple(self.obs)

    @property
    def size(self) -> int:
        return len(self.states)

    def index(self, state: str) -> int:
        try:
            return self._index[state]
        except KeyError:
            raise InvalidPathError(f"unknown state {state!r}") from None

    def successors(self, i: int) -> tuple[int, ...]:
        return self._succ[i]

    def support(self) -> tuple[int, ...]:
        return tuple(i for i, p in enumerate(self.init) if p)

    def label(self, prop: str) -> frozenset[int]:
        try:
            return self.labels[prop]
        except KeyError:
            raise KeyError(f"unknown proposition {prop!r}") from None

    def label_ids(self, prop: str) -> list[str]:
        return [self.states[i] for i in sorted(self.label(prop))]

    def observation(self, agent: str, i: int) -> str:
        try:
            return self.obs[agent][i]
        except KeyError:
            raise KeyError(f"unknown agent {agent!r}") from None

    def alphabet(self, agent: str) -> tuple[str, ...]:
        """Observation symbols of ``agent`` in order of first occurrence."""
        return tuple(dict.fromkeys(self.obs[agent]))

    def replace(self, **changes) -> "PODTMC":
        kw = dict(states=self.states, init=self.init, trans=self.trans, obs=self.obs, labels=self.labels)
        kw.update(changes)
        return PODTMC(**kw)


@dataclass(frozen=True)
class PFA:
    """Probabilistic finite automaton ``(Q, Sigma, mu0, Delta, F, lambda)``."""

    states: tuple[str, ...]
    alphabet: tuple[str, ...]
    init: Vector
    letters: Mapping[str, Matrix]
    finals: frozenset[int]
    cutpoint: Fraction

    def __post_init__(self):
        n = len(self.states)
        if n == 0 or not self.alphabet:
            raise ModelError("PFA needs states and letters")
        if len(set(self.states)) != n or len(set(self.alphabet)) != len(self.alphabet):
            raise ModelError("duplicate state or letter")
        if len(self.init) != n or not is_distribution(self.init):
            raise ModelError("init not a distribution")
        for a in self.alphabet:
            if a not in self.letters:
                raise ModelError(f"missing transition matrix for letter {a}")
            m = self.letters[a]
            if len(m) != n or any(len(r) != n for r in m):
                raise ModelError(f"trans[{a}] has wrong dimensions")
            for i, row in enumerate(m):
                if not is_distribution(row):
                    raise ModelError(f"trans[{a}] row {self.states[i]} is not stochastic")
        if any(not 0 <= q < n for q in self.finals):
            raise ModelError("unknown final state")
        if not ZERO < self.cutpoint < ONE:
            raise ModelError("cutpoint must lie strictly between 0 and 1")

    @property
    def final_vector(self) -> Vector:
        return tuple(ONE if q in self.finals else ZERO for q in range(len(self.states)))


# -- paths and measures ------------------------------------------------------


def _check_limit(count: int) -> None:
    limit = max_paths()
    if count > limit:
        raise EnumerationLimitError(f"path enumeration exceeded {limit} paths (set POMETH_MAX_PATHS to raise)")


def extend_index_paths(m: PODTMC, prefix: tuple[int, ...], steps: int) -> list[tuple[int, ...]]:
    """All genuine extensions of ``prefix`` by exactly ``steps`` transitions, in lexicographic order."""
    layer = [prefix]
    for _ in range(steps):
        layer = [p + (j,) for p in layer for j in m.successors(p[-1])]
        _check_limit(len(layer))
    return layer


def index_paths(m: PODTMC, horizon: int) -> list[tuple[int, ...]]:
    if horizon < 0:
        raise ValueError("horizon must be nonnegative")
    layer = [(s,) for s in m.support()]
    for _ in range(horizon):
        layer = [p + (j,) for p in layer for j in m.successors(p[-1])]
        _check_limit(len(layer))
    return layer


def iter_index_paths(m: PODTMC, horizon: int) -> Iterator[tuple[int, ...]]:
    """Streaming variant of :func:`index_paths`; identical order."""

    def walk(path):
        if len(path) == horizon + 1:
            yield path
            return
        for j in m.successors(path[-1]):
            yield from walk(path + (j,))

    for s in m.support():
        yield from walk((s,))


def enum_paths(m: PODTMC, horizon: int) -> list[FinitePath]:
    """Every finite path with exactly ``horizon`` transitions, as tuples of state ids."""
    return [tuple(m.states[i] for i in p) for p in index_paths(m, horizon)]


def to_indices(m: PODTMC, path: Sequence[str]) -> tuple[int, ...]:
    return tuple(m.index(s) for s in path)


def index_measure(m: PODTMC, path: Sequence[int]) -> Fraction:
    mu = m.init[path[0]]
    for a, b in zip(path, path[1:]):
        if not mu:
            break
        mu *= m.trans[a][b]
    return mu


def validate_path(m: PODTMC, path: Sequence[str]) -> tuple[int, ...]:
    if not path:
        raise InvalidPathError("empty path")
    idx = to_indices(m, path)
    if not m.init[idx[0]]:
        raise InvalidPathError(f"path starts in {path[0]} which has initial probability 0")
    for k, (a, b) in enumerate(zip(idx, idx[1:])):
        if not m.trans[a][b]:
            raise InvalidPathError(f"transition {path[k]} -> {path[k + 1]} has probability 0")
    return idx


def cylinder_measure(m: PODTMC, path: Sequence[str]) -> Fraction:
    """``PI(s0) * PT(s0,s1) * ... * PT(s_{m-1}, s_m)`` for a genuine path."""
    return index_measure(m, validate_path(m, path))


def time_distribution(m: PODTMC, t: int) -> Vector:
    """Exact distribution of the state at time ``t`` (``PI * PT^t``)."""
    if t < 0:
        raise ValueError("time must be nonnegative")
    v = m.init
    for _ in range(t):
        v = vec_mat(v, m.trans)
    return v


def time_distributions(m: PODTMC, upto: int) -> list[Vector]:
    out = [m.init]
    for _ in range(upto):
        out.append(vec_mat(out[-1], m.trans))
    return out


def add_blind_agent(m: PODTMC, agent: str) -> PODTMC:
    """Copy of ``m`` with a fresh agent that observes the same symbol everywhere."""
    if agent in m.obs:
        raise ValueError(f"agent {agent!r} already present")
    obs = dict(m.obs)
    obs[agent] = (BLIND_SYMBOL,) * m.size
    return m.replace(obs=obs)


# -- file formats -------------------------------------------------------------

_RATIONAL = re.compile(r"^[+-]?\d+(/\d+)?$")
_COMMENT = re.compile(r"#.*$")


def parse_rational(tok: str, line: int | None = None, column: int | None = None) -> Fraction:
    tok = tok.strip()
    if not _RATIONAL.match(tok):
        raise ModelError(f"bad rational {tok!r}", line, column)
    try:
        return Fraction(tok)
    except ZeroDivisionError:
        raise ModelError(f"zero denominator in {tok!r}", line, column) from None


class _Lines:
    """Line-oriented reader shared by the model and PFA formats."""

    def __init__(self, text: str):
        self.items = []
        for n, raw in enumerate(text.splitlines(), start=1):
            body = _COMMENT.sub("", raw)
            if not body.strip():
                continue
            if ":" not in body:
                raise ModelError("expected '<keyword>: ...'", n, len(body) - len(body.lstrip()) + 1)
            head, _, rest = body.partition(":")
            col = len(head) + 2
            self.items.append((n, head.strip(), rest, col, raw))


def _split_assign(rest: str, n: int, col: int) -> list[tuple[str, str, int]]:
    out = []
    for m in re.finditer(r"\S+", rest):
        tok = m.group(0)
        if "=" not in tok:
            raise ModelError(f"expected key=value, got {tok!r}", n, col + m.start())
        k, _, v = tok.partition("=")
        if not k or not v:
            raise ModelError(f"malformed assignment {tok!r}", n, col + m.start())
        out.append((k, v, col + m.start()))
    return out


def _parse_edge(rest: str, n: int, col: int) -> tuple[str, str, Fraction]:
    m = re.match(r"^\s*(\S+)\s*->\s*(\S+)\s*:\s*(\S+)\s*$", rest)
    if not m:
        raise ModelError("expected 'src -> dst : p'", n, col)
    return m.group(1), m.group(2), parse_rational(m.group(3), n, col + m.start(3))


def parse_model(text: str) -> PODTMC:
    """Parse the line-oriented model format into a validated :class:`PODTMC`."""
    lines = _Lines(text)
    states: list[str] | None = None
    init: dict[str, Fraction] = {}
    trans: dict[tuple[str, str], Fraction] = {}
    obs: dict[str, dict[str, str]] = {}
    labels: dict[str, list[str]] = {}
    where: dict[object, int] = {}

    def need_state(s, n, col):
        if states is None:
            raise ModelError("'states:' must come first", n, col)
        if s not in known:
            raise ModelError(f"unknown state {s!r}", n, col)

    known: set[str] = set()
    for n, head, rest, col, _ in lines.items:
        words = head.split()
        key = words[0] if words else ""
        if key == "states" and len(words) == 1:
            if states is not None:
                raise ModelError("duplicate 'states:' line", n, 1)
            states = rest.split()
            seen = set()
            for s in states:
                if s in seen:
                    raise ModelError(f"duplicate state id {s!r}", n, col + rest.index(s))
                if any(c in s for c in "=:#"):
                    raise ModelError(f"illegal state id {s!r}", n, col)
                seen.add(s)
            known = seen
        elif key == "init" and len(words) == 1:
            for s, v, c in _split_assign(rest, n, col):
                need_state(s, n, c)
                if s in init:
                    raise ModelError(f"duplicate init entry for {s}", n, c)
                init[s] = parse_rational(v, n, c)
        elif key == "trans" and len(words) == 1:
            a, b, p = _parse_edge(rest, n, col)
            need_state(a, n, col)
            need_state(b, n, col)
            if (a, b) in trans:
                raise ModelError(f"duplicate transition {a} -> {b}", n, col)
            trans[(a, b)] = p
            where[a] = n
        elif key == "obs" and len(words) == 2:
            agent = words[1]
            if agent in obs:
                raise ModelError(f"duplicate obs line for agent {agent}", n, 1)
            obs[agent] = {}
            for s, v, c in _split_assign(rest, n, col):
                need_state(s, n, c)
                obs[agent][s] = v
            missing = [s for s in (states or []) if s not in obs[agent]]
            if missing:
                raise ModelError(f"missing observation of agent {agent} at state {missing[0]}", n, col)
            where[("obs", agent)] = n
        elif key == "label" and len(words) == 2:
            prop = words[1]
            if prop in labels:
                raise ModelError(f"duplicate label {prop}", n, 1)
            ss = rest.split()
            for s in ss:
                need_state(s, n, col + rest.index(s))
            labels[prop] = ss
        else:
            raise ModelError(f"unknown line keyword {head.strip()!r}", n, 1)
    if states is None:
        raise ModelError("no 'states:' line")
    total = sum(init.values(), ZERO)
    if total != ONE or any(p < 0 for p in init.values()):
        raise ModelError(f"init not a distribution (sums to {total})")
    for s in states:
        row = [p for (a, _), p in trans.items() if a == s]
        if sum(row, ZERO) != ONE or any(not ZERO <= p <= ONE for p in row):
            raise ModelError(f"trans row {s} is not stochastic (sums to {sum(row, ZERO)})", where.get(s))
    return PODTMC.build(states, init, trans, obs, labels)


def format_model(m: PODTMC) -> str:
    """Inverse of :func:`parse_model` (entries with probability 0 are omitted)."""
    out = ["states: " + " ".join(m.states)]
    out.append("init: " + " ".join(f"{s}={_fmt(p)}" for s, p in zip(m.states, m.init) if p))
    for i, row in enumerate(m.trans):
        for j, p in enumerate(row):
            if p:
                out.append(f"trans: {m.states[i]} -> {m.states[j]} : {_fmt(p)}")
    for agent, o in m.obs.items():
        out.append(f"obs {agent}: " + " ".join(f"{s}={x}" for s, x in zip(m.states, o)))
    for prop, ss in m.labels.items():
        out.append(f"label {prop}: " + " ".join(m.states[i] for i in sorted(ss)))
    return "\n".join(out) + "\n"


def parse_pfa(text: str) -> PFA:
    """Parse a PFA file: ``states:``, ``letters:``, ``init:``, ``trans[a]:``, ``finals:``, ``cutpoint:``."""
    lines = _Lines(text)
    states = letters = None
    init: dict[str, Fraction] = {}
    trans: dict[str, dict[tuple[str, str], Fraction]] = {}
    finals: list[str] = []
    cut = None
    for n, head, rest, col, _ in lines.items:
        m = re.fullmatch(r"trans\[(\S+)\]", head)
        if head == "states":
            states = rest.split()
        elif head == "letters":
            letters = rest.split()
        elif head == "init":
            for s, v, c in _split_assign(rest, n, col):
                init[s] = parse_rational(v, n, c)
        elif m:
            a = m.group(1)
            src, dst, p = _parse_edge(rest, n, col)
            table = trans.setdefault(a, {})
            if (src, dst) in table:
                raise ModelError(f"duplicate transition {src} -> {dst} for letter {a}", n, col)
            table[(src, dst)] = p
        elif head == "finals":
            finals = rest.split()
        elif head == "cutpoint":
            cut = parse_rational(rest, n, col)
        else:
            raise ModelError(f"unknown line keyword {head!r}", n, 1)
    if states is None or letters is None or cut is None:
        raise ModelError("PFA needs 'states:', 'letters:' and 'cutpoint:' lines")
    idx = {s: i for i, s in enumerate(states)}
    for s in list(init) + finals:
        if s not in idx:
            raise ModelError(f"unknown state {s!r}")
    for a in trans:
        if a not in letters:
            raise ModelError(f"unknown letter {a!r}")
    mats = {}
    for a in letters:
        rows = [[ZERO] * len(states) for _ in states]
        for (src, dst), p in trans.get(a, {}).items():
            if src not in idx or dst not in idx:
                raise ModelError(f"unknown state in trans[{a}]")
            rows[idx[src]][idx[dst]] = p
        mats[a] = tuple(tuple(r) for r in rows)
    mu0 = tuple(init.get(s, ZERO) for s in states)
    return PFA(tuple(states), tuple(letters), mu0, mats, frozenset(idx[s] for s in finals), cut)


def format_pfa(a: PFA) -> str:
    out = ["states: " + " ".join(a.states), "letters: " + " ".join(a.alphabet)]
    out.append("init: " + " ".join(f"{s}={p}" for s, p in zip(a.states, a.init) if p))
    for x in a.alphabet:
        for i, row in enumerate(a.letters[x]):
            for j, p in enumerate(row):
                if p:
                    out.append(f"trans[{x}]: {a.states[i]} -> {a.states[j]} : {p}")
    out.append("finals: " + " ".join(a.states[q] for q in sorted(a.finals)))
    out.append(f"cutpoint: {a.cutpoint}")
    return "\n".join(out) + "\n"
