"""Dense exact linear algebra over ``fractions.Fraction``.

Matrices are tuples of row tuples, vectors are plain tuples.  Nothing here
ever rounds.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence, Tuple

Vector = Tuple[Fraction, ...]
Matrix = Tuple[Vector, ...]

ZERO = Fraction(0)
ONE = Fraction(1)


def as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, float):
        raise TypeError("floats are not accepted; use Fraction or a 'p/q' string")
    return Fraction(x)


def vector(xs: Iterable) -> Vector:
    return tuple(as_fraction(x) for x in xs)


def matrix(rows: Iterable[Iterable]) -> Matrix:
    m = tuple(vector(r) for r in rows)
    if m and any(len(r) != len(m[0]) for r in m):
        raise ValueError("ragged matrix")
    return m


def shape(m: Matrix) -> tuple[int, int]:
    return (len(m), len(m[0]) if m else 0)


def identity(n: int) -> Matrix:
    return tuple(tuple(ONE if i == j else ZERO for j in range(n)) for i in range(n))


def zeros(rows: int, cols: int) -> Matrix:
    return tuple((ZERO,) * cols for _ in range(rows))


def unit(n: int, i: int) -> Vector:
    return tuple(ONE if k == i else ZERO for k in range(n))


def mat_mul(a: Matrix, b: Matrix) -> Matrix:
    if shape(a)[1] != len(b):
        raise ValueError(f"shape mismatch {shape(a)} x {shape(b)}")
    cols = list(zip(*b))
    return tuple(tuple(sum((x * y for x, y in zip(row, col) if x and y), ZERO) for col in cols) for row in a)


def mat_add(a: Matrix, b: Matrix) -> Matrix:
    if shape(a) != shape(b):
        raise ValueError(f"shape mismatch {shape(a)} + {shape(b)}")
    return tuple(tuple(x + y for x, y in zip(ra, rb)) for ra, rb in zip(a, b))


def mat_scale(c, a: Matrix) -> Matrix:
    c = as_fraction(c)
    return tuple(tuple(c * x for x in row) for row in a)


def mat_sub(a: Matrix, b: Matrix) -> Matrix:
    return mat_add(a, mat_scale(-1, b))


def mat_pow(m: Matrix, n: int) -> Matrix:
    """Exact ``m**n`` by repeated squaring; ``n = 0`` gives the identity."""
    rows, cols = shape(m)
    if rows != cols:
        raise ValueError("mat_pow needs a square matrix")
    if n < 0:
        raise ValueError("negative exponent")
    result = identity(rows)
    base = m
    while n:
        if n & 1:
            result = mat_mul(result, base)
        n >>= 1
        if n:
            base = mat_mul(base, base)
    return result


def vec_mat(v: Sequence[Fraction], m: Matrix) -> Vector:
    """Row vector times matrix."""
    if len(v) != len(m):
        raise ValueError("shape mismatch in vec_mat")
    cols = shape(m)[1]
    out = [ZERO] * cols
    for x, row in zip(v, m):
        if x:
            for j, y in enumerate(row):
                if y:
                    out[j] += x * y
    return tuple(out)


def mat_vec(m: Matrix, v: Sequence[Fraction]) -> Vector:
    if shape(m)[1] != len(v):
        raise ValueError("shape mismatch in mat_vec")
    return tuple(dot(row, v) for row in m)


def dot(u: Sequence[Fraction], v: Sequence[Fraction]) -> Fraction:
    if len(u) != len(v):
        raise ValueError("length mismatch in dot")
    return sum((x * y for x, y in zip(u, v)), ZERO)


def bilinear(v: Sequence[Fraction], m: Matrix, w: Sequence[Fraction]) -> Fraction:
    """``v^T m w``."""
    return dot(vec_mat(v, m), w)


def is_distribution(v: Sequence[Fraction]) -> bool:
    return all(ZERO <= x <= ONE for x in v) and sum(v, ZERO) == ONE


def is_stochastic(m: Matrix) -> bool:
    return all(is_distribution(row) for row in m)


def poly_of_matrix(coeffs: Sequence, m: Matrix) -> Matrix:
    """Evaluate ``sum(coeffs[k] * m**k)`` by Horner's rule (coeffs low to high)."""
    n = shape(m)[0]
    acc = zeros(n, n)
    for c in reversed(coeffs):
        acc = mat_add(mat_mul(acc, m), mat_scale(c, identity(n)))
    return acc
