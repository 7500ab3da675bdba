"""Agents' beliefs under synchronous perfect recall (spr) and clock (clk) semantics.

A belief is the conditional state distribution given everything the agent can
see, carried together with the unnormalised mass of the conditioning event so
callers can clear denominators.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .errors import EnumerationLimitError, ImpossibleObservationError
from .linalg import ZERO, Vector, vec_mat
from .model import PODTMC, index_measure, iter_index_paths, max_paths, time_distribution

SPR = "spr"
CLK = "clk"
SEMANTICS = (SPR, CLK)


def check_semantics(sem: str) -> str:
    if sem not in SEMANTICS:
        raise ValueError(f"unknown semantics {sem!r}; expected 'spr' or 'clk'")
    return sem


@dataclass(frozen=True)
class ObsRecord:
    """What ``agent`` knows at ``time``: a full observation sequence (spr) or the current symbol (clk)."""

    agent: str
    semantics: str
    time: int
    data: tuple[str, ...] | str

    def __post_init__(self):
        check_semantics(self.semantics)
        if self.time < 0:
            raise ValueError("time must be nonnegative")
        if self.semantics == SPR:
            if isinstance(self.data, str):
                raise ValueError("spr records carry a sequence of observations")
            object.__setattr__(self, "data", tuple(self.data))
            if len(self.data) != self.time + 1:
                raise ValueError(f"spr record at time {self.time} needs {self.time + 1} observations, got {len(self.data)}")
        elif not isinstance(self.data, str):
            raise ValueError("clk records carry a single observation symbol")

    @classmethod
    def spr(cls, agent: str, seq: Sequence[str]) -> "ObsRecord":
        seq = tuple(seq)
        return cls(agent, SPR, len(seq) - 1, seq)

    @classmethod
    def clk(cls, agent: str, time: int, symbol: str) -> "ObsRecord":
        return cls(agent, CLK, time, symbol)


@dataclass(frozen=True)
class Belief:
    dist: Vector
    cell_measure: Fraction


def _check_symbols(m: PODTMC, rec: ObsRecord) -> tuple[str, ...]:
    obs = m.obs[rec.agent]  # KeyError for unknown agents
    alphabet = set(obs)
    data = rec.data if rec.semantics == SPR else (rec.data,)
    for x in data:
        if x not in alphabet:
            raise ValueError(f"{x!r} is not an observation of agent {rec.agent}")
    return obs


def _normalise(weights: Sequence[Fraction], rec: ObsRecord) -> Belief:
    mass = sum(weights, ZERO)
    if not mass:
        raise ImpossibleObservationError(f"impossible observation history {rec.data!r} for agent {rec.agent} at time {rec.time}")
    return Belief(tuple(w / mass for w in weights), mass)


def spr_filter(m: PODTMC, rec: ObsRecord) -> Belief:
    """Forward filtering: mask PI by o_0, then alternately step by PT and mask by o_k."""
    if rec.semantics != SPR:
        raise ValueError("spr_filter needs an spr record")
    obs = _check_symbols(m, rec)
    alpha = tuple(p if obs[s] == rec.data[0] else ZERO for s, p in enumerate(m.init))
    for o in rec.data[1:]:
        alpha = vec_mat(alpha, m.trans)
        alpha = tuple(p if obs[s] == o else ZERO for s, p in enumerate(alpha))
    return _normalise(alpha, rec)


def clk_belief(m: PODTMC, rec: ObsRecord) -> Belief:
    """Time-``t`` distribution restricted to states showing the observed symbol, renormalised."""
    if rec.semantics != CLK:
        raise ValueError("clk_belief needs a clk record")
    obs = _check_symbols(m, rec)
    v = time_distribution(m, rec.time)
    return _normalise(tuple(p if obs[s] == rec.data else ZERO for s, p in enumerate(v)), rec)


def belief(m: PODTMC, rec: ObsRecord) -> Belief:
    return spr_filter(m, rec) if rec.semantics == SPR else clk_belief(m, rec)


def brute_force_belief(m: PODTMC, rec: ObsRecord, limit: int | None = None) -> Belief:
    """Reference oracle: enumerate every path of length ``rec.time`` and keep the consistent ones."""
    obs = _check_symbols(m, rec)
    limit = max_paths() if limit is None else limit
    weights = [ZERO] * m.size
    for count, path in enumerate(iter_index_paths(m, rec.time), start=1):
        if count > limit:
            raise EnumerationLimitError(f"more than {limit} paths of length {rec.time}")
        if rec.semantics == SPR:
            ok = all(obs[s] == o for s, o in zip(path, rec.data))
        else:
            ok = obs[path[-1]] == rec.data
        if ok:
            weights[path[-1]] += index_measure(m, path)
    return _normalise(weights, rec)


def cell_partition_measures(m: PODTMC, agent: str, semantics: str, t: int) -> dict:
    """Measure of every nonempty knowledge cell of ``agent`` at time ``t``.

    Keys are observation sequences (spr) or single symbols (clk), sorted.
    """
    check_semantics(semantics)
    if t < 0:
        raise ValueError("time must be nonnegative")
    obs = m.obs[agent]
    if semantics == CLK:
        out: dict = {}
        for s, p in enumerate(time_distribution(m, t)):
            if p:
                out[obs[s]] = out.get(obs[s], ZERO) + p
        return dict(sorted(out.items()))
    layer: dict[tuple[str, ...], list[Fraction]] = {}
    for s, p in enumerate(m.init):
        if p:
            layer.setdefault((obs[s],), [ZERO] * m.size)[s] += p
    for _ in range(t):
        nxt: dict[tuple[str, ...], list[Fraction]] = {}
        for hist, vec in layer.items():
            stepped = vec_mat(vec, m.trans)
            for s, p in enumerate(stepped):
                if p:
                    nxt.setdefault(hist + (obs[s],), [ZERO] * m.size)[s] += p
        layer = nxt
    return {h: sum(v, ZERO) for h, v in sorted(layer.items())}
