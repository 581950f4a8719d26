"""Exact rational scalar layer.

Everything in this package computes over arbitrary-precision rationals,
always in lowest terms with a positive denominator and never implicitly
rounded. gmpy2's mpq provides exactly that contract and is much faster
than the stdlib Fraction; Fraction is the drop-in fallback.
"""
from __future__ import annotations

import math
from typing import Iterable, Sequence

try:
    from gmpy2 import mpq as QQ  # type: ignore[import-untyped]
except ImportError:  # pragma: no cover - exercised only without gmpy2
    from fractions import Fraction as QQ  # type: ignore[assignment]

Q0 = QQ(0)
Q1 = QQ(1)


def as_q(value) -> "QQ":
    """Coerce ints, 'p/q' strings and rationals to QQ. Floats are rejected."""
    if isinstance(value, float):
        raise TypeError("floats are not exact; pass an int, string or rational")
    return QQ(value)


def q_str(q) -> str:
    q = as_q(q)
    n, d = int(q.numerator), int(q.denominator)
    return str(n) if d == 1 else f"{n}/{d}"


def q_floor(q) -> int:
    return int(q.numerator) // int(q.denominator)


def q_round_half_even(q) -> int:
    """Nearest integer, ties to even. Exact and deterministic."""
    n, d = int(q.numerator), int(q.denominator)
    base, rem = divmod(n, d)
    twice = 2 * rem
    if twice > d or (twice == d and base % 2 == 1):
        return base + 1
    return base


def q_round_dyadic(q, bits: int) -> "QQ":
    """Round q to the nearest multiple of 2**-bits (ties to even)."""
    scaled = as_q(q) * (1 << bits)
    return QQ(q_round_half_even(scaled), 1 << bits)


def isqrt_ceil(n: int) -> int:
    if n < 0:
        raise ValueError("isqrt_ceil of a negative number")
    r = math.isqrt(n)
    return r if r * r == n else r + 1


def q_sqrt_ceil(q) -> "QQ":
    """Smallest convenient rational upper bound on sqrt(q): ceil(sqrt(n*d))/d."""
    q = as_q(q)
    if q < 0:
        raise ValueError("sqrt of a negative rational")
    n, d = int(q.numerator), int(q.denominator)
    return QQ(isqrt_ceil(n * d), d)


def q_sqrt_upper(q, bits: int) -> "QQ":
    """Upper bound on sqrt(q) with relative error at most 2**-bits."""
    q = as_q(q)
    if q <= 0:
        raise ValueError("q_sqrt_upper needs a positive rational")
    n, d = int(q.numerator), int(q.denominator)
    shift = 1 << bits
    t = math.isqrt(n * d * shift * shift)
    return QQ(t + 1, d * shift)


def q_max(values: Iterable) -> "QQ":
    it = iter(values)
    best = as_q(next(it))
    for v in it:
        v = as_q(v)
        if v > best:
            best = v
    return best


def dot(a: Sequence, b: Sequence) -> "QQ":
    if len(a) != len(b):
        raise ValueError("dot of vectors with different lengths")
    total = Q0
    for x, y in zip(a, b):
        total += x * y
    return total


def norm_sq(a: Sequence) -> "QQ":
    total = Q0
    for x in a:
        total += x * x
    return total


def vec_sub(a: Sequence, b: Sequence) -> list:
    return [x - y for x, y in zip(a, b)]


def vec_add(a: Sequence, b: Sequence) -> list:
    return [x + y for x, y in zip(a, b)]


def vec_scale(a: Sequence, s) -> list:
    return [x * s for x in a]


def qv(values: Iterable) -> list:
    return [as_q(v) for v in values]
