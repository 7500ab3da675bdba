"""Executable reductions into model checking questions.

* PFA cut-point emptiness to ``EF(Pr[i](p) > lambda)`` under spr;
* Diophantine equations to a mixed-time atom on a fixed 4-state chain;
* linear recurrences to matrix powers and then to a stochastic instance
  ``exists t . Pr(p@t) = c`` (the Skolem problem).
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .formula import Cmp, E, Finally, Formula, MixedTimeAtom, Polynomial, Pr, PrAt, Prop
from .linalg import (
    ONE,
    ZERO,
    Matrix,
    Vector,
    dot,
    identity,
    mat_add,
    mat_mul,
    mat_scale,
    mat_sub,
    mat_vec,
    matrix,
    unit,
    vec_mat,
    vector,
)
from .model import BLIND_SYMBOL, PFA, PODTMC

# -- PFA ------------------------------------------------------------------------------------


def pfa_accept_weight(a: PFA, word: Sequence[str]) -> Fraction:
    """Acceptance probability ``mu0 Delta(a_1) ... Delta(a_n) v_F`` of a nonempty word."""
    if not word:
        raise ValueError("the cut-point language is over nonempty words")
    v = a.init
    for x in word:
        if x not in a.letters:
            raise ValueError(f"unknown letter {x!r}")
        v = vec_mat(v, a.letters[x])
    return dot(v, a.final_vector)


def _weight(a: PFA, word: Sequence[str]) -> Fraction:
    # same as pfa_accept_weight but also defined on the empty word
    v = a.init
    for x in word:
        v = vec_mat(v, a.letters[x])
    return dot(v, a.final_vector)


def pfa_state(q: str, x: str) -> str:
    return f"{q}.{x}"


def pfa_to_podtmc(a: PFA, horizon: int | None = None) -> tuple[PODTMC, Formula]:
    """Model on ``Q x Sigma`` where agent ``i`` sees the letter just read.

    ``PI(q,x) = mu0(q)/N`` and ``PT((q,x),(q',y)) = Delta(y)(q,q')/N``.  At
    time ``m`` the spr belief of ``i`` is ``mu0 Delta(a_1)..Delta(a_m)``, so
    ``Pr[i](p)`` equals the acceptance weight of the letters read after time 0.
    The formula is ``EF(Pr[i](p) > lambda)``, with ``F<=horizon`` if given.
    """
    n = len(a.alphabet)
    inv = Fraction(1, n)
    states = [pfa_state(q, x) for q in a.states for x in a.alphabet]
    init = {pfa_state(q, x): p * inv for q, p in zip(a.states, a.init) if p for x in a.alphabet}
    trans = {}
    for i, q in enumerate(a.states):
        for x in a.alphabet:
            for y in a.alphabet:
                for j, q2 in enumerate(a.states):
                    p = a.letters[y][i][j]
                    if p:
                        trans[(pfa_state(q, x), pfa_state(q2, y))] = p * inv
    obs = {"i": {pfa_state(q, x): x for q in a.states for x in a.alphabet}}
    labels = {"p": [pfa_state(a.states[q], x) for q in sorted(a.finals) for x in a.alphabet]}
    m = PODTMC.build(states, init, trans, obs, labels)
    phi = E(Finally(Cmp(Polynomial.of(Pr("i", Prop("p"))), ">", a.cutpoint), horizon))
    return m, phi


def best_word(a: PFA, max_len: int, min_len: int = 0) -> tuple[tuple[str, ...], Fraction]:
    """Highest-weight word of length in ``[min_len, max_len]`` (ties broken by length, then letter order)."""
    best = None
    layer = [((), a.init)]
    for length in range(max_len + 1):
        if length >= min_len:
            for w, v in layer:
                val = dot(v, a.final_vector)
                if best is None or val > best[1]:
                    best = (w, val)
        layer = [(w + (x,), vec_mat(v, a.letters[x])) for w, v in layer for x in a.alphabet]
    if best is None:
        raise ValueError("empty length range")
    return best


# -- the fixed four-state chain ----------------------------------------------------------------

HILBERT_A: Matrix = matrix(
    [
        [Fraction(1, 2), 0, 0, Fraction(1, 2)],
        [Fraction(1, 4), Fraction(1, 2), 0, Fraction(1, 4)],
        [Fraction(1, 3), Fraction(1, 3), Fraction(1, 3), 0],
        [0, 0, 0, 1],
    ]
)
HILBERT_F: Vector = vector([Fraction(1, 4)] * 4)
HILBERT_G1: Vector = vector([0, Fraction(4, 3), Fraction(8, 3), 0])  # eigenvector for 1/2
HILBERT_G2: Vector = vector([Fraction(8, 3), 0, Fraction(-8, 3), 0])  # f A^n g2 = n/2^n
HILBERT_G: Vector = vector([Fraction(8, 3), Fraction(-8, 3), -8, 0])  # g2 - 2 g1, f A^n g = (n-2)/2^n
HILBERT_AGENT = "i"


def hilbert_chain() -> PODTMC:
    """States ``s1..s4``, initial distribution uniform, one blind agent, ``p_k`` true at ``s_k`` only."""
    states = [f"s{k}" for k in range(1, 5)]
    trans = {(states[r], states[c]): p for r, row in enumerate(HILBERT_A) for c, p in enumerate(row) if p}
    return PODTMC.build(
        states,
        dict(zip(states, HILBERT_F)),
        trans,
        {HILBERT_AGENT: {s: BLIND_SYMBOL for s in states}},
        {f"p{k}": [f"s{k}"] for k in range(1, 5)},
    )


def minimal_polynomial_value(a: Matrix = HILBERT_A) -> Matrix:
    """``(A - I)(A - 1/2 I)^2 (A - 1/3 I)``; the zero matrix for the chain's transition matrix."""
    n = len(a)
    i = identity(n)
    f = mat_sub(a, i)
    for r in (Fraction(1, 2), Fraction(1, 2), Fraction(1, 3)):
        f = mat_mul(f, mat_sub(a, mat_scale(r, i)))
    return f


def perron_power(n: int) -> Matrix:
    """``A^n`` from the four-term polynomial expansion in ``A`` (only for ``n >= 1``)."""
    if n < 1:
        raise ValueError("the expansion is used for n >= 1")
    a = HILBERT_A
    i = identity(4)
    a1 = mat_sub(a, i)
    ah = mat_sub(a, mat_scale(Fraction(1, 2), i))
    at = mat_sub(a, mat_scale(Fraction(1, 3), i))
    half, third = Fraction(1, 2), Fraction(1, 3)
    out = mat_scale(6, mat_mul(mat_mul(ah, ah), at))
    out = mat_sub(out, mat_scale(12 * half**n, mat_mul(a1, at)))
    out = mat_sub(out, mat_scale(12 * (half ** (n - 1) * n - 4 * half**n), mat_mul(mat_mul(a1, ah), at)))
    out = mat_sub(out, mat_scale(54 * third**n, mat_mul(mat_mul(a1, ah), ah)))
    return out


# -- Diophantine polynomials -------------------------------------------------------------------


@dataclass(frozen=True)
class DiophantinePoly:
    """Integer polynomial ``sum a * n_1^i_1 ... n_k^i_k``; ``monomials`` holds ``(a, (i_1..i_k))``."""

    variables: tuple[str, ...]
    monomials: tuple[tuple[int, tuple[int, ...]], ...]

    def __post_init__(self):
        object.__setattr__(self, "variables", tuple(self.variables))
        merged: dict[tuple[int, ...], int] = {}
        for coef, exps in self.monomials:
            exps = tuple(exps)
            if len(exps) != len(self.variables) or any(e < 0 for e in exps):
                raise ValueError("exponent vector does not match the variables")
            if int(coef) != coef:
                raise ValueError("coefficients must be integers")
            merged[exps] = merged.get(exps, 0) + int(coef)
        object.__setattr__(self, "monomials", tuple((c, e) for e, c in sorted(merged.items()) if c))

    @property
    def degrees(self) -> tuple[int, ...]:
        """Per-variable degree ``d_j`` (max exponent over monomials)."""
        return tuple(max((e[j] for _, e in self.monomials), default=0) for j in range(len(self.variables)))

    def __call__(self, *values: int) -> int:
        return sum(c * math.prod(v**e for v, e in zip(values, exps)) for c, exps in self.monomials)

    def __str__(self) -> str:
        parts = []
        for c, exps in self.monomials:
            factors = [f"{v}^{e}" for v, e in zip(self.variables, exps) if e]
            body = "*".join([str(abs(c))] + factors)
            parts.append(("- " if c < 0 else "+ ") + body)
        text = " ".join(parts) if parts else "+ 0"
        text = text[2:] if text.startswith("+ ") else "-" + text[2:]
        return f"p({','.join(self.variables)}) = {text}"


_DIOPH_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_]\w*)|(\S))")


def _natural_key(name: str):
    return [int(p) if p.isdigit() else p for p in re.split(r"(\d+)", name)]


def parse_dioph(text: str) -> DiophantinePoly:
    """Parse ``p(n1,n2) = 3*n1^2 - n2 + 1`` or just the right-hand side."""
    head = re.match(r"\s*\w+\s*\(([^)]*)\)\s*=", text)
    declared = None
    if head:
        declared = [v.strip() for v in head.group(1).split(",") if v.strip()]
        text = text[head.end():]
    tokens = []
    pos = 0
    while pos < len(text):
        m = _DIOPH_TOKEN.match(text, pos)
        if not m or m.end() == pos:
            break
        if m.group(0).strip():
            tokens.append((m.group(1) or m.group(2) or m.group(3), m.start(m.lastindex)))
        pos = m.end()
    raw: list[tuple[int, dict[str, int]]] = []
    k = 0

    def fail(msg):
        where = tokens[k][1] if k < len(tokens) else len(text)
        raise ValueError(f"{msg} at column {where + 1}")

    def peek():
        return tokens[k][0] if k < len(tokens) else None

    while True:
        sign = 1
        if peek() in ("+", "-"):
            sign = -1 if peek() == "-" else 1
            k += 1
        elif raw:
            break
        coef, powers, expect_factor = 1, {}, True
        while expect_factor:
            tok = peek()
            if tok is None:
                fail("unexpected end of polynomial")
            if tok.isdigit():
                coef *= int(tok)
                k += 1
            elif re.fullmatch(r"[A-Za-z_]\w*", tok):
                k += 1
                e = 1
                if peek() == "^":
                    k += 1
                    if peek() is None or not peek().isdigit():
                        fail("expected an exponent")
                    e = int(peek())
                    k += 1
                powers[tok] = powers.get(tok, 0) + e
            else:
                fail(f"unexpected {tok!r}")
            expect_factor = peek() == "*"
            if expect_factor:
                k += 1
        raw.append((sign * coef, powers))
        if peek() is None:
            break
    if k != len(tokens):
        fail(f"unexpected {peek()!r}")
    used = {v for _, p in raw for v in p}
    if declared is None:
        variables = sorted(used, key=_natural_key)
    else:
        variables = declared
        extra = used - set(declared)
        if extra:
            raise ValueError(f"undeclared variables {sorted(extra)}")
    return DiophantinePoly(tuple(variables), tuple((c, tuple(p.get(v, 0) for v in variables)) for c, p in raw))


def x_term(tvar: str) -> Polynomial:
    """Value ``(1/2)^t`` on the chain."""
    return Polynomial.of(PrAt("p2", tvar)).scale(Fraction(4, 3)) + Polynomial.of(PrAt("p3", tvar)).scale(Fraction(8, 3))


def w_term(tvar: str) -> Polynomial:
    """Value ``t (1/2)^t`` on the chain."""
    return Polynomial.of(PrAt("p1", tvar)).scale(Fraction(8, 3)) - Polynomial.of(PrAt("p3", tvar)).scale(Fraction(8, 3))


def dioph_to_atom(p: DiophantinePoly) -> tuple[PODTMC, MixedTimeAtom]:
    """Atom ``exists t_1..t_k . Z = 0`` with ``Z(n) = (1/2)^(sum d_j n_j) p(n)`` on the chain."""
    tvars = tuple(f"t{j}" for j in range(1, len(p.variables) + 1))
    degs = p.degrees
    xs = [x_term(t) for t in tvars]
    ws = [w_term(t) for t in tvars]
    z = Polynomial()
    for coef, exps in p.monomials:
        mono = Polynomial.const(coef)
        for j, e in enumerate(exps):
            mono = mono * ws[j] ** e * xs[j] ** (degs[j] - e)
        z = z + mono
    return hilbert_chain(), MixedTimeAtom(tvars, z, "=", 0)


# -- linear recurrences ---------------------------------------------------------------------------


@dataclass(frozen=True)
class LRS:
    """``u_n = a_1 u_{n-1} + ... + a_k u_{n-k}`` for ``n >= k``, with ``u_0..u_{k-1}`` given."""

    coeffs: tuple[Fraction, ...]
    init: tuple[Fraction, ...]

    def __post_init__(self):
        object.__setattr__(self, "coeffs", vector(self.coeffs))
        object.__setattr__(self, "init", vector(self.init))
        if not self.coeffs:
            raise ValueError("order must be at least 1")
        if len(self.init) != len(self.coeffs):
            raise ValueError("need exactly k initial terms")
        if self.coeffs[-1] == 0:
            raise ValueError("a_k must be nonzero")

    @property
    def order(self) -> int:
        return len(self.coeffs)


def lrs_terms(s: LRS, upto: int) -> list[Fraction]:
    """``u_0 .. u_upto`` by the recurrence."""
    u = list(s.init[: upto + 1])
    while len(u) <= upto:
        u.append(sum((a * u[-1 - i] for i, a in enumerate(s.coeffs)), ZERO))
    return u


def lrs_term(s: LRS, n: int) -> Fraction:
    if n < 0:
        raise ValueError("n must be nonnegative")
    return lrs_terms(s, n)[n]


def lrs_to_matrix(s: LRS) -> tuple[Matrix, Vector, Vector]:
    """Companion matrix ``C`` with ``e_1^T C^n (u_0..u_{k-1}) = u_n``."""
    k = s.order
    rows = [unit(k, i + 1) for i in range(k - 1)]
    rows.append(tuple(reversed(s.coeffs)))
    return matrix(rows), unit(k, 0), s.init


def _lcm_denominator(values) -> int:
    return math.lcm(1, *(Fraction(v).denominator for v in values))


def integer_matrix_to_stochastic(a: Matrix, i0: int, j0: int) -> tuple[Matrix, Vector, Vector, Fraction]:
    """Stochastic ``B``, distribution ``v``, 0/1 vector ``w`` and ``c`` with
    ``v^T B^n w = c + (A^n)[i0][j0] / (t k')^n`` for every ``n >= 1``.

    ``A`` is bordered by a source row and a sink column chosen so every row
    and column of the bordered matrix ``E`` sums to zero.  Then ``E J = J E = 0``
    for the all-ones ``J``, so ``(E + tJ)^n = E^n + t^n k'^(n-1) J``; choosing
    ``t`` at least the largest negative entry makes ``(E + tJ)/(t k')``
    stochastic with ``c = 1/k'``.
    """
    k = len(a)
    if any(len(r) != k for r in a):
        raise ValueError("matrix must be square")
    if any(Fraction(x).denominator != 1 for r in a for x in r):
        raise ValueError("matrix must have integer entries")
    if not (0 <= i0 < k and 0 <= j0 < k):
        raise ValueError("index out of range")
    n = k + 2
    total = sum((Fraction(x) for r in a for x in r), ZERO)
    e = [[ZERO] * n for _ in range(n)]
    for c in range(k):
        e[0][c + 1] = -sum((Fraction(a[r][c]) for r in range(k)), ZERO)
    e[0][n - 1] = total
    for r in range(k):
        for c in range(k):
            e[r + 1][c + 1] = Fraction(a[r][c])
        e[r + 1][n - 1] = -sum((Fraction(x) for x in a[r]), ZERO)
    t = max([ONE] + [-x for row in e for x in row])
    scale = t * n
    b = matrix([[(x + t) / scale for x in row] for row in e])
    return b, unit(n, i0 + 1), unit(n, j0 + 1), Fraction(1, n)


def skolem_matrix(s: LRS) -> Matrix:
    """``[[C, C w], [0, 0]]`` whose top-right entry of the ``n``-th power is ``u_n`` for ``n >= 1``."""
    c, _, w = lrs_to_matrix(s)
    cw = mat_vec(c, w)
    k = s.order
    rows = [tuple(c[r]) + (cw[r],) for r in range(k)]
    rows.append((ZERO,) * (k + 1))
    return matrix(rows)


def skolem_instance(s: LRS) -> tuple[PODTMC, MixedTimeAtom]:
    """Blind-agent model and atom ``exists t . Pr(p@t) = c`` whose witnesses are the ``t >= 1`` with ``u_t = 0``.

    Rational data are cleared to integers first; scaling the matrix by ``L``
    scales the ``n``-th term by ``L^n`` and keeps its zeros.
    """
    m0 = skolem_matrix(s)
    lcm = _lcm_denominator(x for r in m0 for x in r)
    ints = mat_scale(lcm, m0)
    b, v, w, c = integer_matrix_to_stochastic(ints, 0, s.order)
    states = [f"q{j}" for j in range(len(b))]
    trans = {(states[r], states[col]): p for r, row in enumerate(b) for col, p in enumerate(row) if p}
    model = PODTMC.build(
        states,
        {states[j]: p for j, p in enumerate(v) if p},
        trans,
        {"i": {st: BLIND_SYMBOL for st in states}},
        {"p": [states[j] for j, x in enumerate(w) if x]},
    )
    atom = MixedTimeAtom(("t",), Polynomial.of(PrAt("p", "t")), "=", c)
    return model, atom


def parse_rationals(text: str) -> tuple[Fraction, ...]:
    """Comma- or space-separated rationals, e.g. ``"2,-1"`` or ``"1/2 3"``."""
    parts = [p for p in re.split(r"[,\s]+", text.strip()) if p]
    try:
        return tuple(Fraction(p) for p in parts)
    except ValueError as exc:
        raise ValueError(f"bad rational list {text!r}") from exc
