"""Formula ASTs for bounded CTL*-with-knowledge-and-probability and mixed-time atoms.

Every node is a frozen dataclass, so formulas are hashable and structural
equality is meaningful.  Polynomials are kept in a canonical form (like
monomials merged, zero coefficients dropped, deterministic order), which makes
structural equality coincide with polynomial equality.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Mapping, Union

RELATIONS = ("<", "<=", "=", ">=", ">")


def compare(a, rel: str, b) -> bool:
    if rel == "<":
        return a < b
    if rel == "<=":
        return a <= b
    if rel == "=":
        return a == b
    if rel == ">=":
        return a >= b
    if rel == ">":
        return a > b
    raise ValueError(f"unknown relation {rel!r}")


# -- probability terms ---------------------------------------------------------


@dataclass(frozen=True)
class Pr:
    """Agent's probability of ``arg`` at the current point."""

    agent: str
    arg: "Formula"


@dataclass(frozen=True)
class Prior:
    """Agent's probability of ``arg`` at time 0 of the current run."""

    agent: str
    arg: "Formula"


@dataclass(frozen=True)
class PrAt:
    """Global probability that ``prop`` holds at time variable ``tvar``."""

    prop: str
    tvar: str


@dataclass(frozen=True)
class PrAgentAt:
    """Agent's probability of ``arg`` at time variable ``tvar``."""

    agent: str
    tvar: str
    arg: "Formula"


ProbTerm = Union[Pr, Prior, PrAt, PrAgentAt]


def _term_key(t: ProbTerm) -> str:
    from .parser import show_term

    return show_term(t)


Monomial = tuple  # (Fraction coefficient, ((term, exponent), ...))


@dataclass(frozen=True)
class Polynomial:
    """Sum of ``coef * prod(term ** exp)``; construct via the helpers, which canonicalise."""

    monomials: tuple = ()

    def __post_init__(self):
        merged: dict[tuple, Fraction] = {}
        for coef, factors in self.monomials:
            powers: dict = {}
            for term, e in factors:
                if e < 1:
                    raise ValueError("exponents must be >= 1")
                powers[term] = powers.get(term, 0) + e
            key = tuple(sorted(powers.items(), key=lambda te: _term_key(te[0])))
            merged[key] = merged.get(key, Fraction(0)) + Fraction(coef)
        canon = tuple(
            (c, k)
            for k, c in sorted(merged.items(), key=lambda kc: (sum(e for _, e in kc[0]), [(_term_key(t), e) for t, e in kc[0]]))
            if c
        )
        object.__setattr__(self, "monomials", canon)

    @classmethod
    def const(cls, c) -> "Polynomial":
        return cls(((Fraction(c), ()),))

    @classmethod
    def of(cls, term: ProbTerm) -> "Polynomial":
        return cls(((Fraction(1), ((term, 1),)),))

    def __add__(self, other: "Polynomial") -> "Polynomial":
        return Polynomial(self.monomials + _poly(other).monomials)

    def __neg__(self) -> "Polynomial":
        return self.scale(-1)

    def __sub__(self, other: "Polynomial") -> "Polynomial":
        return self + (-_poly(other))

    def __mul__(self, other: "Polynomial") -> "Polynomial":
        other = _poly(other)
        return Polynomial(tuple((c1 * c2, f1 + f2) for c1, f1 in self.monomials for c2, f2 in other.monomials))

    __radd__ = __add__
    __rmul__ = __mul__

    def __pow__(self, n: int) -> "Polynomial":
        out = Polynomial.const(1)
        for _ in range(n):
            out = out * self
        return out

    def scale(self, c) -> "Polynomial":
        c = Fraction(c)
        return Polynomial(tuple((c * k, f) for k, f in self.monomials))

    def terms(self) -> list[ProbTerm]:
        seen: dict = {}
        for _, factors in self.monomials:
            for t, _ in factors:
                seen.setdefault(t, None)
        return list(seen)

    def degree(self) -> int:
        return max((sum(e for _, e in f) for _, f in self.monomials), default=0)

    def max_exponents(self) -> dict:
        out: dict = {}
        for _, factors in self.monomials:
            for t, e in factors:
                out[t] = max(out.get(t, 0), e)
        return out

    def evaluate(self, values: Mapping[ProbTerm, Fraction]) -> Fraction:
        total = Fraction(0)
        for coef, factors in self.monomials:
            v = coef
            for t, e in factors:
                v *= values[t] ** e
            total += v
        return total

    def map_terms(self, fn) -> "Polynomial":
        """Substitute each term by the polynomial ``fn(term)``."""
        out = Polynomial()
        for coef, factors in self.monomials:
            mono = Polynomial.const(coef)
            for t, e in factors:
                mono = mono * (_poly(fn(t)) ** e)
            out = out + mono
        return out


def _poly(x) -> Polynomial:
    if isinstance(x, Polynomial):
        return x
    if isinstance(x, (Pr, Prior, PrAt, PrAgentAt)):
        return Polynomial.of(x)
    return Polynomial.const(x)


# -- formulas ----------------------------------------------------------------


@dataclass(frozen=True)
class Prop:
    name: str


@dataclass(frozen=True)
class TrueF:
    pass


@dataclass(frozen=True)
class Not:
    arg: "Formula"


@dataclass(frozen=True)
class And:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Or:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Implies:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class A:
    arg: "Formula"


@dataclass(frozen=True)
class E:
    arg: "Formula"


@dataclass(frozen=True)
class X:
    arg: "Formula"


@dataclass(frozen=True)
class Until:
    left: "Formula"
    right: "Formula"
    bound: int | None = None


@dataclass(frozen=True)
class Finally:
    arg: "Formula"
    bound: int | None = None


@dataclass(frozen=True)
class Globally:
    arg: "Formula"
    bound: int | None = None


@dataclass(frozen=True)
class K:
    agent: str
    arg: "Formula"


@dataclass(frozen=True)
class Cmp:
    poly: Polynomial
    rel: str
    rhs: Fraction

    def __post_init__(self):
        if self.rel not in RELATIONS:
            raise ValueError(f"unknown relation {self.rel!r}")
        object.__setattr__(self, "rhs", Fraction(self.rhs))


Formula = Union[Prop, TrueF, Not, And, Or, Implies, A, E, X, Until, Finally, Globally, K, Cmp]

UNARY = (Not, A, E, X, Finally, Globally, K)
BINARY = (And, Or, Implies, Until)


@dataclass(frozen=True)
class MixedTimeAtom:
    """``exists t_1 .. t_n . poly REL rhs`` with every term indexed by a time variable."""

    time_vars: tuple[str, ...]
    poly: Polynomial
    rel: str
    rhs: Fraction

    def __post_init__(self):
        object.__setattr__(self, "time_vars", tuple(self.time_vars))
        object.__setattr__(self, "rhs", Fraction(self.rhs))
        if self.rel not in RELATIONS:
            raise ValueError(f"unknown relation {self.rel!r}")
        if len(set(self.time_vars)) != len(self.time_vars):
            raise ValueError("time variables must be distinct")
        for t in self.poly.terms():
            if not isinstance(t, (PrAt, PrAgentAt)):
                raise ValueError("mixed-time atoms only allow time-indexed probability terms")
            if t.tvar not in self.time_vars:
                raise ValueError(f"undeclared time variable {t.tvar!r}")


FALSE = Not(TrueF())
TRUE = TrueF()


def children(phi: Formula) -> tuple:
    if isinstance(phi, (Prop, TrueF)):
        return ()
    if isinstance(phi, BINARY):
        return (phi.left, phi.right)
    if isinstance(phi, Cmp):
        return tuple(t.arg for t in phi.poly.terms() if hasattr(t, "arg"))
    return (phi.arg,)


def walk(phi: Formula) -> Iterator[Formula]:
    """Pre-order traversal, descending into probability-term arguments."""
    yield phi
    for c in children(phi):
        yield from walk(c)


def conj(items) -> Formula:
    items = list(items)
    if not items:
        return TRUE
    out = items[-1]
    for f in reversed(items[:-1]):
        out = And(f, out)
    return out


def props(phi: Formula) -> set[str]:
    return {f.name for f in walk(phi) if isinstance(f, Prop)}


def agents(phi: Formula) -> set[str]:
    out = set()
    for f in walk(phi):
        if isinstance(f, K):
            out.add(f.agent)
        elif isinstance(f, Cmp):
            out.update(t.agent for t in f.poly.terms() if hasattr(t, "agent"))
    return out
