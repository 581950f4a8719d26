"""Guaranteed-precision eigenvalue bounds for symmetric rational matrices.

The smallest eigenvalue is isolated with a Sturm chain of the (squarefree)
characteristic polynomial and refined by bisection between Gershgorin
bounds, entirely over exact rationals. Approximate eigenvectors come from
exact inverse iteration with an exact residual acceptance test.
"""
from __future__ import annotations

from ._ratio import QQ, Q0, Q1, as_q, norm_sq, q_round_dyadic
from .errors import ContractViolation
from .linalg import Matrix, Polynomial, char_poly, kernel_vector, poly_divmod, poly_gcd, solve_linear

_EIGENVECTOR_ROUND_BITS = 128


def gershgorin_bounds(m: Matrix):
    """(lo, hi) with every eigenvalue of the symmetric matrix in [lo, hi]."""
    lo = None
    hi = None
    for i, row in enumerate(m.data):
        radius = Q0
        for j, v in enumerate(row):
            if i != j:
                radius += -v if v < 0 else v
        a, b = row[i] - radius, row[i] + radius
        lo = a if lo is None or a < lo else lo
        hi = b if hi is None or b > hi else hi
    if lo is None:
        raise ContractViolation("gershgorin_bounds of an empty matrix")
    return lo, hi


def squarefree_part(p: Polynomial) -> Polynomial:
    g = poly_gcd(p, p.derivative())
    if g.is_zero() or g.degree == 0:
        return p
    q, _ = poly_divmod(p, g)
    return q


def sturm_chain(p: Polynomial) -> list:
    chain = [p, p.derivative()]
    while chain[-1].degree > 0:
        _, r = poly_divmod(chain[-2], chain[-1])
        if r.is_zero():
            break
        chain.append(r.scale(-1))
    return chain


def sign_variations(chain, x) -> int:
    signs = []
    for p in chain:
        v = p.eval(x)
        if v != 0:
            signs.append(1 if v > 0 else -1)
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def count_roots_leq(chain, sentinel, x) -> int:
    """Number of distinct real roots in (sentinel, x], chain of a squarefree p."""
    return sign_variations(chain, sentinel) - sign_variations(chain, x)


def approx_min_eigenvalue(m: Matrix, prec) -> "QQ":
    """lambda_tilde with |lambda_tilde - lambda_min(M)| <= prec, M symmetric."""
    prec = as_q(prec)
    if prec <= 0:
        raise ContractViolation("precision must be positive")
    if not m.is_square() or not m.is_symmetric():
        raise ContractViolation("approx_min_eigenvalue requires a symmetric matrix")
    if m.rows == 0:
        raise ContractViolation("empty matrix has no eigenvalues")
    p = squarefree_part(char_poly(m))
    chain = sturm_chain(p)
    g_lo, g_hi = gershgorin_bounds(m)
    sentinel = g_lo - 1
    lo, hi = sentinel, g_hi
    if count_roots_leq(chain, sentinel, hi) < 1:  # pragma: no cover - Gershgorin guarantees a root
        raise ContractViolation("no eigenvalue found below the Gershgorin upper bound")
    # invariant: no root <= lo, at least one root <= hi
    while hi - lo > prec:
        mid = (lo + hi) / 2
        if count_roots_leq(chain, sentinel, mid) >= 1:
            hi = mid
        else:
            lo = mid
    return (lo + hi) / 2


def _scale_into_window(v: list) -> list:
    """Scale by a power of two so that ||v||^2 lands in [1/4, 4]."""
    s = norm_sq(v)
    if s == 0:
        raise ContractViolation("cannot normalize the zero vector")
    while s > 4:
        v = [x / 2 for x in v]
        s = s / 4
    while s < QQ(1, 4):
        v = [x * 2 for x in v]
        s = s * 4
    return v


def approx_eigenvector(m: Matrix, lam, tol) -> list:
    """Rational v with ||(M - lam*I) v|| < tol/2 and ||v||^2 in [1/4, 4].

    Requires lam within tol/4 of a true eigenvalue. Exact kernel directions
    are returned directly; otherwise deterministic inverse iteration from
    each basis vector runs until the exact residual test passes. Exhausting
    the search means the precondition on lam was violated.
    """
    tol = as_q(tol)
    if tol <= 0:
        raise ContractViolation("tolerance must be positive")
    if not m.is_square() or not m.is_symmetric():
        raise ContractViolation("approx_eigenvector requires a symmetric matrix")
    lam = as_q(lam)
    n = m.rows
    shifted = m.shifted(-lam)
    target = (tol / 2) ** 2

    kern = kernel_vector(shifted)
    if kern is not None:
        return _scale_into_window(kern)

    def residual_ok(v: list) -> bool:
        return norm_sq(shifted.matvec(v)) < target

    for start in range(n):
        w = [Q0] * n
        w[start] = Q1
        for _ in range(25):
            sol = solve_linear(shifted, w)
            if sol is None:  # rounding made the shift exactly singular
                kern = kernel_vector(shifted)
                if kern is not None:
                    v = _scale_into_window(kern)
                    if residual_ok(v):
                        return v
                break  # pragma: no cover - singular without kernel is impossible
            w = _scale_into_window(sol)
            if residual_ok(w):
                return w
            w = [q_round_dyadic(x, _EIGENVECTOR_ROUND_BITS) for x in w]
            if norm_sq(w) == 0:  # pragma: no cover - window keeps the norm near 1
                break
    raise ContractViolation(
        "residual search exhausted: the eigenvalue estimate is not within tol/4 of the spectrum"
    )
