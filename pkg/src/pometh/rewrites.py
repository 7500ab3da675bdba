"""Syntactic transformations: reach, the CTLPK fragment, and knowledge/probability elimination."""

from __future__ import annotations

import math
import re
from fractions import Fraction

from .errors import NotCTLPKError
from .formula import (
    A,
    And,
    Cmp,
    E,
    Finally,
    Formula,
    Globally,
    Implies,
    K,
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
    conj,
)
from .model import BLIND_SYMBOL, PODTMC, add_blind_agent

BLIND_AGENT = "⊥"


def dependence_horizon(phi: Formula) -> float:
    """Number of steps past the current time that evaluating ``phi`` may look at.

    ``X`` adds one, a bounded until/finally/globally adds its bound, and
    ``K``, ``A``, ``E`` and probability terms pass through their argument's
    horizon.  Unbounded temporal operators give ``math.inf``.
    """
    if isinstance(phi, (Prop, TrueF)):
        return 0
    if isinstance(phi, (Not, A, E, K)):
        return dependence_horizon(phi.arg)
    if isinstance(phi, (And, Or, Implies)):
        return max(dependence_horizon(phi.left), dependence_horizon(phi.right))
    if isinstance(phi, X):
        return 1 + dependence_horizon(phi.arg)
    if isinstance(phi, Until):
        if phi.bound is None:
            return math.inf
        return phi.bound + max(dependence_horizon(phi.left), dependence_horizon(phi.right))
    if isinstance(phi, (Finally, Globally)):
        if phi.bound is None:
            return math.inf
        return phi.bound + dependence_horizon(phi.arg)
    if isinstance(phi, Cmp):
        return max((dependence_horizon(t.arg) for t in phi.poly.terms() if hasattr(t, "arg")), default=0)
    raise TypeError(f"not a formula: {phi!r}")


def is_bounded(phi: Formula) -> bool:
    return dependence_horizon(phi) != math.inf


# -- CTLPK ------------------------------------------------------------------------


def _path_ok(phi) -> bool:
    # argument of A/E: one temporal step over state formulas, or a state formula
    if isinstance(phi, (X, Finally, Globally)):
        return is_ctlpk(phi.arg)
    if isinstance(phi, Until):
        return is_ctlpk(phi.left) and is_ctlpk(phi.right)
    return is_ctlpk(phi)


def is_ctlpk(phi: Formula) -> bool:
    """True when X/U/F/G only occur directly under A or E."""
    if isinstance(phi, (Prop, TrueF)):
        return True
    if isinstance(phi, (Not, K)):
        return is_ctlpk(phi.arg)
    if isinstance(phi, (And, Or, Implies)):
        return is_ctlpk(phi.left) and is_ctlpk(phi.right)
    if isinstance(phi, (A, E)):
        return _path_ok(phi.arg)
    if isinstance(phi, Cmp):
        return all(is_ctlpk(t.arg) for t in phi.poly.terms() if hasattr(t, "arg"))
    return False


def _map(phi: Formula, fn) -> Formula:
    """Rebuild ``phi`` bottom-up, applying ``fn`` to each rebuilt node."""
    if isinstance(phi, (Prop, TrueF)):
        return fn(phi)
    if isinstance(phi, (And, Or, Implies)):
        return fn(type(phi)(_map(phi.left, fn), _map(phi.right, fn)))
    if isinstance(phi, Until):
        return fn(Until(_map(phi.left, fn), _map(phi.right, fn), phi.bound))
    if isinstance(phi, (Finally, Globally)):
        return fn(type(phi)(_map(phi.arg, fn), phi.bound))
    if isinstance(phi, K):
        return fn(K(phi.agent, _map(phi.arg, fn)))
    if isinstance(phi, (Not, A, E, X)):
        return fn(type(phi)(_map(phi.arg, fn)))
    if isinstance(phi, Cmp):
        return fn(Cmp(phi.poly.map_terms(lambda t: _map_term(t, fn)), phi.rel, phi.rhs))
    raise TypeError(f"not a formula: {phi!r}")


def _map_term(t, fn):
    if isinstance(t, Pr):
        return Pr(t.agent, _map(t.arg, fn))
    if isinstance(t, Prior):
        return Prior(t.agent, _map(t.arg, fn))
    if isinstance(t, PrAgentAt):
        return PrAgentAt(t.agent, t.tvar, _map(t.arg, fn))
    return t


def rewrite_k_to_prob(phi: Formula) -> Formula:
    """Replace every ``K[i] psi`` by ``Pr[i](psi) = 1``; only sound on CTLPK input."""
    if not is_ctlpk(phi):
        raise NotCTLPKError("not CTLPK: X/U/F/G must appear directly under A or E for K to equal Pr = 1")

    def step(f):
        if isinstance(f, K):
            return Cmp(Polynomial.of(Pr(f.agent, f.arg)), "=", Fraction(1))
        return f

    return _map(phi, step)


# -- clock-semantics elimination ---------------------------------------------------------


def obs_prop(agent: str, j: int) -> str:
    return f"obs_{re.sub(r'[^A-Za-z0-9_]', '_', agent)}_{j}"


def observation_labelled(m: PODTMC, agent: str, blind: str = BLIND_AGENT) -> PODTMC:
    """Add ``obs_<agent>_<j>`` propositions (one per observation symbol) and a blind agent."""
    labels = dict(m.labels)
    for j, sym in enumerate(m.alphabet(agent), start=1):
        labels[obs_prop(agent, j)] = frozenset(s for s, o in enumerate(m.obs[agent]) if o == sym)
    out = m.replace(labels=labels)
    if blind in out.obs:
        if len(set(out.obs[blind])) != 1:
            raise ValueError(f"agent {blind!r} exists and is not blind")
        return out
    return add_blind_agent(out, blind)


def rewrite_clk_elim(phi: Formula, m: PODTMC, agent: str, blind: str = BLIND_AGENT) -> Formula:
    """Express ``agent``'s knowledge and probability through a blind agent, valid under clk.

    ``K[i] psi`` becomes the conjunction over observations ``o_j`` of
    ``obs_j -> K[blind](obs_j -> psi)``; a comparison ``f(Pr[i](..)) REL c``
    becomes ``obs_j -> f~ REL 0`` where ``f~`` is ``f - c`` with each
    ``Pr[i](psi)`` replaced by ``Pr[blind](obs_j & psi)`` and every monomial
    homogenised by powers of ``Pr[blind](obs_j)``.  Evaluate the result on
    :func:`observation_labelled` of the model.
    """
    n_obs = len(m.alphabet(agent))
    obs = [Prop(obs_prop(agent, j)) for j in range(1, n_obs + 1)]

    def step(f):
        if isinstance(f, K):
            if f.agent != agent:
                raise ValueError(f"formula uses K of agent {f.agent!r}, expected only {agent!r}")
            return conj(Implies(o, K(blind, Implies(o, f.arg))) for o in obs)
        if isinstance(f, Cmp):
            terms = f.poly.terms()
            if not terms:
                return f
            for t in terms:
                if isinstance(t, Prior):
                    raise ValueError("Prior terms cannot be eliminated under clk in this fragment")
                if not isinstance(t, Pr) or t.agent != agent:
                    raise ValueError(f"formula uses probability terms other than Pr[{agent}]")
            return conj(Implies(o, Cmp(_homogenise(f, o, blind), f.rel, Fraction(0))) for o in obs)
        return f

    return _map(phi, step)


def _homogenise(f: Cmp, o: Prop, blind: str) -> Polynomial:
    norm = Polynomial.of(Pr(blind, o))
    deg = f.poly.degree()
    out = (norm ** deg).scale(-f.rhs)
    for coef, factors in f.poly.monomials:
        mono = Polynomial.const(coef)
        for t, e in factors:
            mono = mono * (Polynomial.of(Pr(blind, And(o, t.arg))) ** e)
        out = out + mono * norm ** (deg - sum(e for _, e in factors))
    return out


# -- the counterexample chain -------------------------------------------------------------


def figure_model() -> PODTMC:
    """Two-state chain where ``q`` fails eventually with probability 1 but not on every run.

    ``s`` (labelled ``q``) loops with probability 1/2 and otherwise moves to the
    absorbing ``u``; a single blind agent ``i`` observes nothing.
    """
    return PODTMC.build(
        ["s", "u"],
        {"s": 1},
        {("s", "s"): Fraction(1, 2), ("s", "u"): Fraction(1, 2), ("u", "u"): 1},
        {"i": {"s": BLIND_SYMBOL, "u": BLIND_SYMBOL}},
        {"q": ["s"]},
    )
