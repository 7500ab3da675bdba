"""Concrete syntax for formulas: a tokenizer, a recursive-descent parser and a printer.

Binding strength, tightest first: prefix operators (``! A E X F G K[i]``),
``U``, ``&``, ``|``, ``->`` (right associative).  ``show`` parenthesises
every binary node so that ``parse(show(f)) == f``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction

from .errors import FormulaSyntaxError
from .formula import (
    RELATIONS,
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
)

MAX_BOUND = 10**6

_TOKEN = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<rat>\d+(?:/\d+)?)
  | (?P<rel><=|>=|->|[<>=])
  | (?P<bracket>\[[^\]]*\])
  | (?P<ident>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<punct>[()!&|*^+\-@.])
    """,
    re.VERBOSE,
)

_PREFIX_LETTERS = set("AEXFG")


@dataclass
class Token:
    kind: str
    text: str
    pos: int


def tokenize(text: str) -> list[Token]:
    out: list[Token] = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise FormulaSyntaxError(f"unexpected character {text[pos]!r}", pos, text)
        kind = m.lastgroup
        tok = m.group(0)
        if kind == "ident" and set(tok) <= _PREFIX_LETTERS:
            # ``EF`` or ``AG`` written without a space
            out.extend(Token("op", ch, pos + k) for k, ch in enumerate(tok))
        elif kind == "rel" and tok == "->":
            out.append(Token("punct", tok, pos))
        elif kind != "ws":
            out.append(Token(kind, tok, pos))
        pos = m.end()
    out.append(Token("eof", "", len(text)))
    return out


class Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = tokenize(text)
        self.i = 0
        self.time_vars: tuple[str, ...] = ()

    # -- helpers -------------------------------------------------------------
    @property
    def tok(self) -> Token:
        return self.tokens[self.i]

    def peek(self, k: int = 1) -> Token:
        return self.tokens[min(self.i + k, len(self.tokens) - 1)]

    def error(self, msg: str, tok: Token | None = None):
        tok = tok or self.tok
        raise FormulaSyntaxError(msg, tok.pos, self.text)

    def take(self) -> Token:
        t = self.tok
        self.i += 1
        return t

    def expect(self, text: str) -> Token:
        if self.tok.text != text:
            self.error(f"expected {text!r}, found {self.tok.text or 'end of input'!r}")
        return self.take()

    def at(self, *texts: str) -> bool:
        return self.tok.text in texts and self.tok.kind != "bracket"

    # -- entry points ----------------------------------------------------------
    def parse_top(self):
        if self.tok.kind == "ident" and self.tok.text == "exists":
            result = self.mixed()
        else:
            result = self.formula()
        if self.tok.kind != "eof":
            self.error(f"unexpected {self.tok.text!r}")
        return result

    def mixed(self) -> MixedTimeAtom:
        self.take()
        tvars = []
        while self.tok.kind == "ident":
            tvars.append(self.take().text)
        if not tvars:
            self.error("expected at least one time variable")
        if len(set(tvars)) != len(tvars):
            self.error("repeated time variable")
        self.expect(".")
        self.time_vars = tuple(tvars)
        poly = self.poly()
        rel, rhs = self.relation()
        for t in poly.terms():
            if isinstance(t, (Pr, Prior)):
                self.error("mixed-time atoms need time-indexed terms such as Pr(p@t) or Pr[i,t](phi)")
        return MixedTimeAtom(self.time_vars, poly, rel, rhs)

    # -- formula levels ----------------------------------------------------------
    def formula(self) -> Formula:
        left = self.disj()
        if self.at("->"):
            self.take()
            return Implies(left, self.formula())
        return left

    def disj(self) -> Formula:
        left = self.conj()
        while self.at("|"):
            self.take()
            left = Or(left, self.conj())
        return left

    def conj(self) -> Formula:
        left = self.until()
        while self.at("&"):
            self.take()
            left = And(left, self.until())
        return left

    def until(self) -> Formula:
        left = self.unary()
        if self.tok.kind == "ident" and self.tok.text == "U":
            self.take()
            bound = self.bound()
            return Until(left, self.until(), bound)
        return left

    def bound(self) -> int | None:
        if self.tok.text != "<=":
            return None
        self.take()
        t = self.tok
        if t.kind != "rat" or "/" in t.text:
            self.error("expected an integer bound")
        self.take()
        b = int(t.text)
        if b > MAX_BOUND:
            self.error(f"bound overflow ({b} > {MAX_BOUND})", t)
        return b

    def unary(self) -> Formula:
        t = self.tok
        if t.text == "!":
            self.take()
            return Not(self.unary())
        if t.kind == "op":
            self.take()
            if t.text == "A":
                return A(self.unary())
            if t.text == "E":
                return E(self.unary())
            if t.text == "X":
                return X(self.unary())
            b = self.bound()
            return Finally(self.unary(), b) if t.text == "F" else Globally(self.unary(), b)
        if t.kind == "ident" and t.text == "K" and self.peek().kind == "bracket":
            self.take()
            agent = self.agent_bracket(self.take(), allow_time=False)[0]
            return K(agent, self.unary())
        return self.primary()

    def primary(self) -> Formula:
        t = self.tok
        if t.text == "(":
            self.take()
            f = self.formula()
            self.expect(")")
            return f
        if t.kind == "ident" and t.text == "true":
            self.take()
            return TrueF()
        if t.kind == "ident" and t.text == "false":
            self.take()
            return Not(TrueF())
        if t.kind == "rat" or t.text in ("-", "+") or (t.kind == "ident" and t.text in ("Pr", "Prior")):
            poly = self.poly()
            rel, rhs = self.relation()
            return Cmp(poly, rel, rhs)
        if t.kind == "ident" and t.text not in ("U", "K", "exists"):
            self.take()
            return Prop(t.text)
        self.error(f"unexpected {t.text or 'end of input'!r}")

    # -- polynomials -------------------------------------------------------------
    def relation(self) -> tuple[str, Fraction]:
        t = self.tok
        if t.kind != "rel" or t.text not in RELATIONS:
            self.error("expected a comparison (<, <=, =, >=, >)")
        self.take()
        sign = 1
        if self.at("-", "+"):
            sign = -1 if self.take().text == "-" else 1
        if self.tok.kind != "rat":
            self.error("expected a rational constant")
        return t.text, sign * self.rational(self.take())

    def rational(self, tok: Token) -> Fraction:
        try:
            return Fraction(tok.text)
        except ZeroDivisionError:
            self.error("zero denominator", tok)

    def poly(self) -> Polynomial:
        sign = 1
        if self.at("-", "+"):
            sign = -1 if self.take().text == "-" else 1
        total = self.monomial().scale(sign)
        while self.at("+", "-"):
            sign = -1 if self.take().text == "-" else 1
            total = total + self.monomial().scale(sign)
        return total

    def monomial(self) -> Polynomial:
        out = self.factor()
        while self.at("*"):
            self.take()
            out = out * self.factor()
        return out

    def factor(self) -> Polynomial:
        t = self.tok
        if t.kind == "rat":
            self.take()
            return Polynomial.const(self.rational(t))
        if t.kind == "ident" and t.text in ("Pr", "Prior"):
            term = Polynomial.of(self.term())
            if self.at("^"):
                self.take()
                e = self.tok
                if e.kind != "rat" or "/" in e.text or int(e.text) < 1:
                    self.error("expected a positive integer exponent")
                self.take()
                term = term ** int(e.text)
            return term
        self.error(f"expected a coefficient or probability term, found {t.text or 'end of input'!r}")

    def agent_bracket(self, tok: Token, allow_time: bool) -> tuple[str, str | None]:
        inner = tok.text[1:-1]
        parts = [p.strip() for p in inner.split(",")]
        if not parts[0] or len(parts) > 2 or (len(parts) == 2 and not allow_time):
            self.error(f"malformed agent index {tok.text!r}", tok)
        tvar = parts[1] if len(parts) == 2 else None
        if tvar is not None:
            self.check_tvar(tvar, tok)
        return parts[0], tvar

    def check_tvar(self, tvar: str, tok: Token):
        if tvar not in self.time_vars:
            self.error(f"undeclared time variable {tvar!r}", tok)

    def term(self):
        kw = self.take().text
        if self.tok.kind == "bracket":
            br = self.take()
            agent, tvar = self.agent_bracket(br, allow_time=(kw == "Pr"))
            self.expect("(")
            arg = self.formula()
            self.expect(")")
            if kw == "Prior":
                return Prior(agent, arg)
            return PrAgentAt(agent, tvar, arg) if tvar else Pr(agent, arg)
        if kw != "Pr":
            self.error("Prior needs an agent, e.g. Prior[i](p)")
        self.expect("(")
        p = self.tok
        if p.kind != "ident":
            self.error("expected a proposition")
        self.take()
        self.expect("@")
        tv = self.tok
        if tv.kind != "ident":
            self.error("expected a time variable")
        self.take()
        self.check_tvar(tv.text, tv)
        self.expect(")")
        return PrAt(p.text, tv.text)


def parse_formula(text: str):
    """Parse a formula or an ``exists t1 .. tn . poly REL c`` mixed-time atom."""
    return Parser(text).parse_top()


# -- printing -------------------------------------------------------------------


def _bound(b: int | None) -> str:
    return "" if b is None else f"<={b}"


def show(f) -> str:
    if isinstance(f, MixedTimeAtom):
        return f"exists {' '.join(f.time_vars)} . {show_poly(f.poly)} {f.rel} {f.rhs}"
    if isinstance(f, Prop):
        return f.name
    if isinstance(f, TrueF):
        return "true"
    if isinstance(f, Not):
        return "!" + show(f.arg)
    if isinstance(f, And):
        return f"({show(f.left)} & {show(f.right)})"
    if isinstance(f, Or):
        return f"({show(f.left)} | {show(f.right)})"
    if isinstance(f, Implies):
        return f"({show(f.left)} -> {show(f.right)})"
    if isinstance(f, A):
        return "A " + show(f.arg)
    if isinstance(f, E):
        return "E " + show(f.arg)
    if isinstance(f, X):
        return "X " + show(f.arg)
    if isinstance(f, Finally):
        return f"F{_bound(f.bound)} " + show(f.arg)
    if isinstance(f, Globally):
        return f"G{_bound(f.bound)} " + show(f.arg)
    if isinstance(f, Until):
        op = "U" if f.bound is None else f"U<={f.bound}"
        return f"({show(f.left)} {op} {show(f.right)})"
    if isinstance(f, K):
        return f"K[{f.agent}] " + show(f.arg)
    if isinstance(f, Cmp):
        return f"({show_poly(f.poly)} {f.rel} {f.rhs})"
    raise TypeError(f"not a formula: {f!r}")


def show_term(t) -> str:
    if isinstance(t, Pr):
        return f"Pr[{t.agent}]({show(t.arg)})"
    if isinstance(t, Prior):
        return f"Prior[{t.agent}]({show(t.arg)})"
    if isinstance(t, PrAt):
        return f"Pr({t.prop}@{t.tvar})"
    if isinstance(t, PrAgentAt):
        return f"Pr[{t.agent},{t.tvar}]({show(t.arg)})"
    raise TypeError(f"not a probability term: {t!r}")


def show_poly(p: Polynomial) -> str:
    if not p.monomials:
        return "0"
    parts = []
    for k, (coef, factors) in enumerate(p.monomials):
        mag = abs(coef)
        body = str(mag)
        for t, e in factors:
            body += "*" + show_term(t) + (f"^{e}" if e > 1 else "")
        if k == 0:
            parts.append(("-" if coef < 0 else "") + body)
        else:
            parts.append(("- " if coef < 0 else "+ ") + body)
    return " ".join(parts)
