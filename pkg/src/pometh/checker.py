"""Exact evaluation of formulas on PO-DTMCs under clk and spr semantics.

Three routes, chosen by the shape of the query:

* bounded formulas are evaluated exactly by enumerating finite path prefixes
  and summing cylinder measures;
* unbounded ``F``/``G`` under ``A``, ``E``, ``K`` or a probability-0/1
  comparison are decided at time 0 from the transition graph alone;
* anything else with unbounded operators is a semi-decision: bounded under-
  and over-approximations at a caller-supplied horizon, which may leave the
  question open.

Mixed-time atoms are handled by :func:`witness_search`, which is complete
only for witnesses within the bound.
"""

from __future__ import annotations

import itertools
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Sequence

import networkx as nx

from .belief import SPR, check_semantics
from .errors import UnboundedFormulaError
from .formula import (
    TRUE,
    A,
    And,
    Cmp,
    E,
    Finally,
    Formula,
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
    compare,
)
from .model import (
    PODTMC,
    extend_index_paths,
    index_measure,
    index_paths,
    time_distributions,
    validate_path,
)
from .rewrites import is_bounded

FALSE = Not(TRUE)

UNDECIDABLE_HINT = (
    "unbounded temporal operators cannot be evaluated numerically in general "
    "(such queries are Skolem-hard or undecidable); supply a horizon for a bounded semi-decision"
)


@dataclass(frozen=True)
class Point:
    """A run prefix together with the current time (defaults to the last position)."""

    prefix: tuple[str, ...]
    time: int | None = None

    def __post_init__(self):
        object.__setattr__(self, "prefix", tuple(self.prefix))
        if not self.prefix:
            raise ValueError("a point needs a nonempty prefix")
        if self.time is None:
            object.__setattr__(self, "time", len(self.prefix) - 1)
        if not 0 <= self.time < len(self.prefix):
            raise ValueError("time must index into the prefix")


@dataclass(frozen=True)
class Verdict:
    kind: str  # HOLDS, FAILS, WITNESS or NOWITNESS
    point: tuple[str, ...] | None = None
    assignment: tuple[tuple[str, int], ...] | None = None
    bound: int | None = None

    @property
    def positive(self) -> bool:
        return self.kind in ("HOLDS", "WITNESS")

    def __str__(self) -> str:
        if self.kind == "FAILS":
            return f"FAILS pt={','.join(self.point)}"
        if self.kind == "WITNESS":
            return "WITNESS " + " ".join(f"{t}={n}" for t, n in self.assignment)
        if self.kind == "NOWITNESS":
            return f"NOWITNESS bound={self.bound}"
        return self.kind

    def as_dict(self) -> dict:
        out: dict = {"verdict": self.kind}
        if self.point is not None:
            out["pt"] = list(self.point)
        if self.assignment is not None:
            out["assignment"] = dict(self.assignment)
        if self.bound is not None:
            out["bound"] = self.bound
        return out


HOLDS = Verdict("HOLDS")


def run_reach(phi: Formula) -> float:
    """Steps past the current time on which the *run* (not the agent's cell) matters.

    ``A``, ``E``, ``K`` and comparisons are determined by the prefix up to now,
    so they contribute 0 when their argument is bounded.
    """
    if isinstance(phi, (Prop, TrueF)):
        return 0
    if isinstance(phi, Not):
        return run_reach(phi.arg)
    if isinstance(phi, (And, Or, Implies)):
        return max(run_reach(phi.left), run_reach(phi.right))
    if isinstance(phi, X):
        return 1 + run_reach(phi.arg)
    if isinstance(phi, Until):
        if phi.bound is None:
            return math.inf
        return phi.bound + max(run_reach(phi.left), run_reach(phi.right))
    if isinstance(phi, (Finally, Globally)):
        return math.inf if phi.bound is None else phi.bound + run_reach(phi.arg)
    if isinstance(phi, (A, E, K, Cmp)):
        return 0 if is_bounded(phi) else math.inf
    raise TypeError(f"not a formula: {phi!r}")


class Evaluator:
    """Memoising evaluator for one model and one semantics.

    Caches are private to the instance, so separate instances never interact.
    Paths are tuples of state indices.
    """

    def __init__(self, m: PODTMC, sem: str):
        self.m = m
        self.sem = check_semantics(sem)
        self._paths: dict[int, list] = {}
        self._cells: dict[tuple, dict] = {}
        self._memo: dict[tuple, object] = {}
        self._reach: dict[Formula, float] = {}

    def reach(self, phi: Formula) -> int:
        r = self._reach.get(phi)
        if r is None:
            r = self._reach[phi] = run_reach(phi)
        if r == math.inf:
            raise UnboundedFormulaError(f"cannot evaluate {_short(phi)}: {UNDECIDABLE_HINT}")
        return r

    def paths(self, t: int) -> list:
        if t not in self._paths:
            self._paths[t] = index_paths(self.m, t)
        return self._paths[t]

    def cell_key(self, agent: str, prefix: tuple) -> tuple:
        obs = self.m.obs[agent]
        if self.sem == SPR:
            return tuple(obs[s] for s in prefix)
        return (len(prefix) - 1, obs[prefix[-1]])

    def cell(self, agent: str, prefix: tuple) -> list:
        t = len(prefix) - 1
        groups = self._cells.get((agent, t))
        if groups is None:
            groups = {}
            for p in self.paths(t):
                groups.setdefault(self.cell_key(agent, p), []).append(p)
            self._cells[(agent, t)] = groups
        return groups.get(self.cell_key(agent, prefix), [])

    # -- satisfaction ------------------------------------------------------------
    def holds(self, phi: Formula, path: tuple, t: int) -> bool:
        if isinstance(phi, Prop):
            return path[t] in self.m.label(phi.name)
        if isinstance(phi, TrueF):
            return True
        if isinstance(phi, Not):
            return not self.holds(phi.arg, path, t)
        if isinstance(phi, And):
            return self.holds(phi.left, path, t) and self.holds(phi.right, path, t)
        if isinstance(phi, Or):
            return self.holds(phi.left, path, t) or self.holds(phi.right, path, t)
        if isinstance(phi, Implies):
            return not self.holds(phi.left, path, t) or self.holds(phi.right, path, t)
        if isinstance(phi, X):
            return self.holds(phi.arg, path, t + 1)
        if isinstance(phi, (Until, Finally, Globally)) and phi.bound is None:
            raise UnboundedFormulaError(f"cannot evaluate {_short(phi)}: {UNDECIDABLE_HINT}")
        if isinstance(phi, Until):
            for j in range(t, t + phi.bound + 1):
                if self.holds(phi.right, path, j):
                    return True
                if not self.holds(phi.left, path, j):
                    return False
            return False
        if isinstance(phi, Finally):
            return any(self.holds(phi.arg, path, j) for j in range(t, t + phi.bound + 1))
        if isinstance(phi, Globally):
            return all(self.holds(phi.arg, path, j) for j in range(t, t + phi.bound + 1))
        if isinstance(phi, (A, E)):
            prefix = path[: t + 1]
            key = (phi, prefix)
            if key not in self._memo:
                steps = self.reach(phi.arg)
                exts = extend_index_paths(self.m, prefix, steps)
                test = all if isinstance(phi, A) else any
                self._memo[key] = test(self.holds(phi.arg, x, t) for x in exts)
            return self._memo[key]
        if isinstance(phi, K):
            prefix = path[: t + 1]
            key = (phi, self.cell_key(phi.agent, prefix))
            if key not in self._memo:
                steps = self.reach(phi.arg)
                self._memo[key] = all(
                    self.holds(phi.arg, x, t) for c in self.cell(phi.agent, prefix) for x in extend_index_paths(self.m, c, steps)
                )
            return self._memo[key]
        if isinstance(phi, Cmp):
            values = {term: self.term_masses(term, path, t) for term in phi.poly.terms()}
            return compare_cleared(phi.poly, phi.rel, phi.rhs, values)
        raise TypeError(f"not a formula: {phi!r}")

    def term_masses(self, term, path: tuple, t: int) -> tuple[Fraction, Fraction]:
        """``(mass of the cell where the argument holds, mass of the cell)``."""
        if isinstance(term, Prior):
            path, t = path[:1], 0
        elif not isinstance(term, Pr):
            raise ValueError("time-indexed probability terms are only meaningful inside an exists-atom")
        prefix = path[: t + 1]
        key = ("mass", term.agent, term.arg, self.cell_key(term.agent, prefix))
        if key not in self._memo:
            steps = self.reach(term.arg)
            num = den = Fraction(0)
            for c in self.cell(term.agent, prefix):
                den += index_measure(self.m, c)
                for x in extend_index_paths(self.m, c, steps):
                    if self.holds(term.arg, x, t):
                        num += index_measure(self.m, x)
            self._memo[key] = (num, den)
        return self._memo[key]


def compare_cleared(poly: Polynomial, rel: str, rhs: Fraction, masses: dict) -> bool:
    """Decide ``poly(num/den, ...) REL rhs`` after multiplying through by the positive denominators."""
    exps = poly.max_exponents()
    scale = Fraction(1)
    for term, e in exps.items():
        scale *= masses[term][1] ** e
    lhs = Fraction(0)
    for coef, factors in poly.monomials:
        v = coef
        used = dict(factors)
        for term, e in exps.items():
            num, den = masses[term]
            k = used.get(term, 0)
            v *= num**k * den ** (e - k)
        lhs += v
    return compare(lhs, rel, rhs * scale)


def _short(phi) -> str:
    from .parser import show

    s = show(phi)
    return s if len(s) < 60 else s[:57] + "..."


# -- public entry points ------------------------------------------------------------------


def _point_indices(m: PODTMC, pt: Point) -> tuple:
    return validate_path(m, pt.prefix)


def eval_point(m: PODTMC, sem: str, phi: Formula, pt: Point, evaluator: Evaluator | None = None) -> bool:
    """Truth of a bounded formula at a point; the prefix must cover the formula's run reach."""
    ev = evaluator or Evaluator(m, sem)
    path = _point_indices(m, pt)
    need = pt.time + ev.reach(phi)
    if len(path) - 1 < need:
        raise ValueError(f"point prefix has {len(path) - 1} transitions but the formula needs {need}")
    return ev.holds(phi, path, pt.time)


def eval_prob_term(m: PODTMC, sem: str, term, pt: Point) -> Fraction:
    """Exact value of ``Pr[i](..)`` or ``Prior[i](..)`` at a point."""
    ev = Evaluator(m, sem)
    num, den = ev.term_masses(term, _point_indices(m, pt), pt.time)
    return num / den


def check(m: PODTMC, sem: str, phi, horizon: int | None = None, jobs: int = 1) -> Verdict:
    """Does ``phi`` hold at time 0 on every run?

    ``horizon`` is used only for formulas with unbounded operators that have
    no exact qualitative decision, and for the witness bound of mixed-time
    atoms.
    """
    check_semantics(sem)
    if isinstance(phi, MixedTimeAtom):
        if horizon is None:
            raise UnboundedFormulaError("an exists-atom needs a search bound")
        return witness_search(m, phi, horizon, jobs=jobs)
    reach = run_reach(phi)
    if reach != math.inf:
        return _bounded_check(m, sem, phi, reach)
    qual = decide_qualitative(m, sem, phi)
    if qual is not None:
        return qual
    if horizon is None:
        raise UnboundedFormulaError(f"{_short(phi)}: {UNDECIDABLE_HINT}")
    under = approximate(phi, horizon, under=True)
    over = approximate(phi, horizon, under=False)
    if under is None and over is None:
        raise UnboundedFormulaError(f"{_short(phi)} has no monotone bounded approximation; {UNDECIDABLE_HINT}")
    if under is not None and _bounded_check(m, sem, under, run_reach(under)).kind == "HOLDS":
        return HOLDS
    if over is not None:
        v = _bounded_check(m, sem, over, run_reach(over))
        if v.kind == "FAILS":
            return v
    return Verdict("NOWITNESS", bound=horizon)


def _bounded_check(m: PODTMC, sem: str, phi: Formula, reach: int) -> Verdict:
    ev = Evaluator(m, sem)
    for p in index_paths(m, reach):
        if not ev.holds(phi, p, 0):
            return Verdict("FAILS", point=tuple(m.states[s] for s in p))
    return HOLDS


# -- bounded approximations of unbounded operators ------------------------------------------


def approximate(phi: Formula, horizon: int, under: bool) -> Formula | None:
    """Bounded formula implied by (``under=True``) or implying (``under=False``) ``phi``.

    Returns ``None`` when a non-monotone context (an equality, or a
    nonlinear comparison) contains an unbounded operator.
    """
    if is_bounded(phi):
        return phi
    if isinstance(phi, Not):
        inner = approximate(phi.arg, horizon, not under)
        return None if inner is None else Not(inner)
    if isinstance(phi, (And, Or)):
        left = approximate(phi.left, horizon, under)
        right = approximate(phi.right, horizon, under)
        return None if left is None or right is None else type(phi)(left, right)
    if isinstance(phi, Implies):
        left = approximate(phi.left, horizon, not under)
        right = approximate(phi.right, horizon, under)
        return None if left is None or right is None else Implies(left, right)
    if isinstance(phi, (A, E, X)):
        inner = approximate(phi.arg, horizon, under)
        return None if inner is None else type(phi)(inner)
    if isinstance(phi, K):
        inner = approximate(phi.arg, horizon, under)
        return None if inner is None else K(phi.agent, inner)
    if isinstance(phi, Until):
        left = approximate(phi.left, horizon, under)
        right = approximate(phi.right, horizon, under)
        if left is None or right is None:
            return None
        if phi.bound is not None:
            return Until(left, right, phi.bound)
        if under:
            return Until(left, right, horizon)
        return Or(Until(left, right, horizon), Globally(left, horizon))
    if isinstance(phi, (Finally, Globally)):
        inner = approximate(phi.arg, horizon, under)
        if inner is None:
            return None
        if phi.bound is not None:
            return type(phi)(inner, phi.bound)
        if isinstance(phi, Finally):
            return Finally(inner, horizon) if under else TRUE
        return FALSE if under else Globally(inner, horizon)
    if isinstance(phi, Cmp):
        return _approximate_cmp(phi, horizon, under)
    raise TypeError(f"not a formula: {phi!r}")


def _approximate_cmp(phi: Cmp, horizon: int, under: bool) -> Cmp | None:
    if phi.rel == "=" or phi.poly.degree() > 1:
        return None
    increasing = phi.rel in (">", ">=")
    replace = {}
    for coef, factors in phi.poly.monomials:
        if not factors:
            continue
        (term, _), = factors
        if isinstance(term, (Pr, Prior)) and not is_bounded(term.arg):
            # a bigger event raises the probability; pick the side that keeps the implication
            grow = (coef > 0) == increasing
            inner = approximate(term.arg, horizon, under if grow else not under)
            if inner is None:
                return None
            replace[term] = type(term)(term.agent, inner)
    return Cmp(phi.poly.map_terms(lambda t: replace.get(t, t)), phi.rel, phi.rhs)


# -- qualitative decisions ---------------------------------------------------------------------


class _NotQualitative(Exception):
    pass


def state_set(m: PODTMC, phi) -> frozenset[int] | None:
    """States satisfying a propositional formula, or ``None`` if ``phi`` is not propositional."""
    if isinstance(phi, str):
        return m.label(phi)
    if isinstance(phi, Prop):
        return m.label(phi.name)
    if isinstance(phi, TrueF):
        return frozenset(range(m.size))
    if isinstance(phi, Not):
        inner = state_set(m, phi.arg)
        return None if inner is None else frozenset(range(m.size)) - inner
    if isinstance(phi, (And, Or, Implies)):
        left, right = state_set(m, phi.left), state_set(m, phi.right)
        if left is None or right is None:
            return None
        if isinstance(phi, And):
            return left & right
        if isinstance(phi, Or):
            return left | right
        return (frozenset(range(m.size)) - left) | right
    return None


def _graph(m: PODTMC, nodes=None) -> nx.DiGraph:
    g = nx.DiGraph()
    keep = range(m.size) if nodes is None else nodes
    g.add_nodes_from(keep)
    keep = set(keep)
    g.add_edges_from((i, j) for i in keep for j in m.successors(i) if j in keep)
    return g


def reachable(m: PODTMC, starts, through=None) -> set[int]:
    """States reachable from ``starts``, expanding only states in ``through`` (all if ``None``)."""
    seen = set(starts)
    stack = list(seen)
    while stack:
        s = stack.pop()
        if through is not None and s not in through:
            continue
        for j in m.successors(s):
            if j not in seen:
                seen.add(j)
                stack.append(j)
    return seen


def almost_sure_eventually(m: PODTMC, target, start: Sequence[int] | None = None) -> bool:
    """Exact decision of ``Pr(F target) = 1`` from the initial support (or ``start``).

    It fails exactly when some bottom SCC without target states is reachable
    along target-free paths.
    """
    goal = state_set(m, target)
    if goal is None:
        raise ValueError("target must be a proposition or a propositional formula")
    starts = m.support() if start is None else tuple(start)
    return _almost_surely(m, starts, goal)


def _has_cycle(m: PODTMC, nodes: set[int]) -> bool:
    return not nx.is_directed_acyclic_graph(_graph(m, sorted(nodes)))


def _all_eventually(m: PODTMC, s: int, goal: frozenset) -> bool:
    if s in goal:
        return True
    avoid = frozenset(range(m.size)) - goal
    return not _has_cycle(m, reachable(m, [s], through=avoid) & avoid)


def _exists_always(m: PODTMC, s: int, goal: frozenset) -> bool:
    if s not in goal:
        return False
    return _has_cycle(m, reachable(m, [s], through=goal) & goal)



def decide_qualitative(m: PODTMC, sem: str, phi: Formula) -> Verdict | None:
    """Exact verdict at time 0 when every unbounded operator sits in a graph-decidable pattern."""
    check_semantics(sem)
    ev = Evaluator(m, sem)
    try:
        for s in m.support():
            if not _qual(m, ev, phi, s):
                return Verdict("FAILS", point=(m.states[s],))
    except _NotQualitative:
        return None
    return HOLDS


def _event_set(m: PODTMC, phi) -> tuple[str, frozenset]:
    if not isinstance(phi, (Finally, Globally)) or phi.bound is not None:
        raise _NotQualitative
    goal = state_set(m, phi.arg)
    if goal is None:
        raise _NotQualitative
    return ("F" if isinstance(phi, Finally) else "G"), goal


def _cell0(m: PODTMC, agent: str, s: int) -> list[int]:
    obs = m.obs[agent]
    return [c for c in m.support() if obs[c] == obs[s]]


def _prob_is(m: PODTMC, s: int, op: str, goal: frozenset, value: int) -> bool:
    """Whether ``Pr_s(op goal)`` equals ``value`` (0 or 1)."""
    everything = frozenset(range(m.size))
    if op == "F":
        if value == 1:
            return _almost_surely(m, [s], goal)
        return not reachable(m, [s]) & goal
    # G goal: probability 1 iff no bad state reachable; 0 iff bad reached almost surely
    if value == 1:
        return not reachable(m, [s]) & (everything - goal)
    return _almost_surely(m, [s], everything - goal)


def _almost_surely(m: PODTMC, starts, goal: frozenset) -> bool:
    avoid = frozenset(range(m.size)) - goal
    region = reachable(m, [s for s in starts if s in avoid], through=avoid) & avoid
    cond = nx.condensation(_graph(m))
    for c in cond.nodes:
        if cond.out_degree(c) == 0:
            members = cond.nodes[c]["members"]
            if not members & goal and members & region:
                return False
    return True


def _qual(m: PODTMC, ev: Evaluator, phi, s: int) -> bool:
    if run_reach(phi) == 0:
        return ev.holds(phi, (s,), 0)
    if isinstance(phi, Not):
        return not _qual(m, ev, phi.arg, s)
    if isinstance(phi, And):
        return _qual(m, ev, phi.left, s) and _qual(m, ev, phi.right, s)
    if isinstance(phi, Or):
        return _qual(m, ev, phi.left, s) or _qual(m, ev, phi.right, s)
    if isinstance(phi, Implies):
        return not _qual(m, ev, phi.left, s) or _qual(m, ev, phi.right, s)
    if isinstance(phi, (A, E, K)):
        op, goal = _event_set(m, phi.arg)
        if isinstance(phi, E):
            return bool(reachable(m, [s]) & goal) if op == "F" else _exists_always(m, s, goal)
        starts = [s] if isinstance(phi, A) else _cell0(m, phi.agent, s)
        if op == "F":
            return all(_all_eventually(m, c, goal) for c in starts)
        return all(not reachable(m, [c]) - goal for c in starts)
    if isinstance(phi, Cmp):
        terms = phi.poly.terms()
        if len(terms) != 1 or phi.poly != Polynomial.of(terms[0]) or not isinstance(terms[0], (Pr, Prior)):
            raise _NotQualitative
        term = terms[0]
        op, goal = _event_set(m, term.arg)
        cell = _cell0(m, term.agent, s)
        all_one = all(_prob_is(m, c, op, goal, 1) for c in cell)
        all_zero = all(_prob_is(m, c, op, goal, 0) for c in cell)
        c, rel = phi.rhs, phi.rel
        table = {
            (1, "="): all_one, (1, ">="): all_one, (1, "<"): not all_one, (1, ">"): False, (1, "<="): True,
            (0, "="): all_zero, (0, "<="): all_zero, (0, ">"): not all_zero, (0, "<"): False, (0, ">="): True,
        }
        if c not in (0, 1):
            raise _NotQualitative
        return table[(int(c), rel)]
    raise _NotQualitative


# -- support-set queries -----------------------------------------------------------------------


def support_sequence(m: PODTMC) -> tuple[list[frozenset[int]], int]:
    """Supports of the time-t distributions up to their first repetition.

    Returns ``(sets, loop_start)``: ``sets[t]`` for ``t < len(sets)`` and the
    sequence continues periodically from ``loop_start``.
    """
    seen: dict[frozenset[int], int] = {}
    sets: list[frozenset[int]] = []
    cur = frozenset(m.support())
    while cur not in seen:
        seen[cur] = len(sets)
        sets.append(cur)
        cur = frozenset(j for i in cur for j in m.successors(i))
    return sets, seen[cur]


def decide_support_query(m: PODTMC, kind: str, pred: str, prop) -> bool:
    """Decide ``exists t`` / ``forall t`` of ``Pr(prop@t) = 0`` (``pred='zero'``) or ``> 0`` (``'positive'``)."""
    if kind not in ("exists", "forall") or pred not in ("zero", "positive"):
        raise ValueError("kind must be exists|forall and pred zero|positive")
    goal = state_set(m, prop)
    if goal is None:
        raise ValueError("prop must be a proposition or a propositional formula")
    sets, _ = support_sequence(m)
    values = [bool(s & goal) == (pred == "positive") for s in sets]
    return any(values) if kind == "exists" else all(values)


# -- witness search for mixed-time atoms -------------------------------------------------------


def time_term_table(m: PODTMC, atom: MixedTimeAtom, bound: int) -> dict:
    """Values of each time-indexed term of ``atom`` at times ``0..bound``."""
    dists = time_distributions(m, bound)
    table = {}
    for term in atom.poly.terms():
        if isinstance(term, PrAt):
            goal = m.label(term.prop)
        else:
            if len(set(m.obs[term.agent])) != 1:
                raise ValueError(f"witness search needs agent {term.agent!r} to be blind")
            goal = state_set(m, term.arg)
            if goal is None:
                raise ValueError("witness search supports only propositional arguments")
        table[term] = [sum((d[s] for s in goal), Fraction(0)) for d in dists]
    return table


def atom_value(m: PODTMC, atom: MixedTimeAtom, assignment: Sequence[int]) -> Fraction:
    """Value of the atom's polynomial when ``time_vars[k]`` is set to ``assignment[k]``."""
    table = time_term_table(m, atom, max(assignment, default=0))
    env = dict(zip(atom.time_vars, assignment))
    return atom.poly.evaluate({t: table[t][env[t.tvar]] for t in table})


def assignment_order(k: int, bound: int) -> Iterator[tuple[int, ...]]:
    """All assignments in ``[0, bound]^k`` ordered by their maximum, then lexicographically."""
    for top in range(bound + 1):
        for a in itertools.product(range(top + 1), repeat=k):
            if max(a, default=0) == top:
                yield a
        if k == 0:
            return


def _scan(poly, rel, rhs, tvars, table, chunk):
    for a in chunk:
        env = dict(zip(tvars, a))
        if compare(poly.evaluate({t: table[t][env[t.tvar]] for t in table}), rel, rhs):
            return a
    return None


def witness_assignments(m: PODTMC, atom: MixedTimeAtom, bound: int) -> Iterator[tuple[int, ...]]:
    """Every satisfying assignment within ``bound``, in search order."""
    table = time_term_table(m, atom, bound)
    for a in assignment_order(len(atom.time_vars), bound):
        if _scan(atom.poly, atom.rel, atom.rhs, atom.time_vars, table, [a]) is not None:
            yield a


def witness_search(m: PODTMC, atom: MixedTimeAtom, bound: int, jobs: int = 1) -> Verdict:
    """Bounded search for a time assignment satisfying ``atom``.

    ``NOWITNESS`` only means none exists up to ``bound``.  With ``jobs > 1``
    each layer of equal maximum is split into contiguous chunks scanned in
    worker processes; the earliest chunk with a hit wins, so the result does
    not depend on scheduling.
    """
    if bound < 0:
        raise ValueError("bound must be nonnegative")
    table = time_term_table(m, atom, bound)
    k = len(atom.time_vars)
    args = (atom.poly, atom.rel, atom.rhs, atom.time_vars, table)
    if jobs <= 1:
        hit = _scan(*args, assignment_order(k, bound))
    else:
        hit = None
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            for top in range(bound + 1):
                layer = [a for a in itertools.product(range(top + 1), repeat=k) if max(a, default=0) == top]
                size = max(1, -(-len(layer) // jobs))
                chunks = [layer[i : i + size] for i in range(0, len(layer), size)]
                results = list(pool.map(_scan, *zip(*[args + (c,) for c in chunks])))
                hit = next((r for r in results if r is not None), None)
                if hit is not None or k == 0:
                    break
    if hit is None:
        return Verdict("NOWITNESS", bound=bound)
    return Verdict("WITNESS", assignment=tuple(zip(atom.time_vars, hit)))
