"""Dense matrices over exact rationals, PSD certificates and characteristic polynomials.

The positive-semidefiniteness test is a decision procedure, not a numeric
heuristic: it either certifies x^T M x >= 0 for all rational x or returns a
concrete witness vector v with v^T M v < 0, established by symmetric
(congruence) elimination over the rationals.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

from ._ratio import QQ, Q0, Q1, as_q, norm_sq
from .errors import ContractViolation

try:
    from gmpy2 import mpz as _big
except ImportError:  # pragma: no cover
    _big = int


class Matrix:
    """Immutable-by-convention dense rational matrix."""

    __slots__ = ("rows", "cols", "data")

    def __init__(self, data: Sequence[Sequence]):
        rows = [[as_q(v) for v in row] for row in data]
        if rows and any(len(r) != len(rows[0]) for r in rows):
            raise ContractViolation("ragged matrix data")
        self.data = rows
        self.rows = len(rows)
        self.cols = len(rows[0]) if rows else 0

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "Matrix":
        return cls([[Q0] * cols for _ in range(rows)])

    @classmethod
    def identity(cls, n: int) -> "Matrix":
        m = [[Q0] * n for _ in range(n)]
        for i in range(n):
            m[i][i] = Q1
        return cls(m)

    def __getitem__(self, key):
        i, j = key
        return self.data[i][j]

    def __eq__(self, other) -> bool:
        return isinstance(other, Matrix) and self.data == other.data

    def __repr__(self) -> str:
        body = "; ".join(" ".join(str(v) for v in row) for row in self.data)
        return f"Matrix({self.rows}x{self.cols}: {body})"

    def copy_data(self) -> list:
        return [row[:] for row in self.data]

    def transpose(self) -> "Matrix":
        return Matrix([[self.data[i][j] for i in range(self.rows)] for j in range(self.cols)])

    def is_symmetric(self) -> bool:
        if self.rows != self.cols:
            return False
        d = self.data
        return all(d[i][j] == d[j][i] for i in range(self.rows) for j in range(i + 1, self.cols))

    def is_square(self) -> bool:
        return self.rows == self.cols

    def add(self, other: "Matrix") -> "Matrix":
        return Matrix([[a + b for a, b in zip(r1, r2)] for r1, r2 in zip(self.data, other.data)])

    def sub(self, other: "Matrix") -> "Matrix":
        return Matrix([[a - b for a, b in zip(r1, r2)] for r1, r2 in zip(self.data, other.data)])

    def scale(self, s) -> "Matrix":
        s = as_q(s)
        return Matrix([[v * s for v in row] for row in self.data])

    def matmul(self, other: "Matrix") -> "Matrix":
        if self.cols != other.rows:
            raise ContractViolation("matmul dimension mismatch")
        ot = other.transpose().data
        return Matrix([[sum((a * b for a, b in zip(row, col)), Q0) for col in ot] for row in self.data])

    def matvec(self, x: Sequence) -> list:
        if self.cols != len(x):
            raise ContractViolation("matvec dimension mismatch")
        return [sum((a * b for a, b in zip(row, x)), Q0) for row in self.data]

    def trace(self):
        if not self.is_square():
            raise ContractViolation("trace of a non-square matrix")
        return sum((self.data[i][i] for i in range(self.rows)), Q0)

    def inner(self, other: "Matrix"):
        """Trace inner product <A, B> = sum_ij A_ij * B_ij."""
        if self.rows != other.rows or self.cols != other.cols:
            raise ContractViolation("inner product dimension mismatch")
        total = Q0
        for r1, r2 in zip(self.data, other.data):
            for a, b in zip(r1, r2):
                total += a * b
        return total

    def norm_sq(self):
        return self.inner(self)

    def inf_norm(self):
        best = Q0
        for row in self.data:
            for v in row:
                a = -v if v < 0 else v
                if a > best:
                    best = a
        return best

    def shifted(self, s) -> "Matrix":
        """self + s * I."""
        if not self.is_square():
            raise ContractViolation("shift of a non-square matrix")
        s = as_q(s)
        out = self.copy_data()
        for i in range(self.rows):
            out[i][i] += s
        return Matrix(out)


def outer(u: Sequence, v: Sequence) -> Matrix:
    return Matrix([[a * b for b in v] for a in u])


@dataclass(frozen=True)
class PsdOutcome:
    is_psd: bool
    witness: Optional[tuple]  # v with v^T M v < 0 when not PSD

    def __bool__(self) -> bool:
        return self.is_psd


def _congruence_witness(data: list) -> Optional[list]:
    """Symmetric elimination on a copy of `data`.

    Returns None when the matrix is PSD, otherwise a witness vector v with
    v^T M v < 0. Elimination factors are recorded and replayed only when a
    witness actually has to be pulled back to the original coordinates, so
    the common PSD path does no transform bookkeeping.
    """
    n = len(data)
    a = [row[:] for row in data]
    steps: list = []  # (pivot index k, [(row i, factor f), ...])

    def pull_back(w: list) -> list:
        # current = T M T^T with T = L_m ... L_1; we need T^T w, and each
        # L^T = I - sum f_i e_k e_i^T only touches coordinate k.
        for k, factors in reversed(steps):
            acc = w[k]
            for i, f in factors:
                acc -= f * w[i]
            w[k] = acc
        return w

    for k in range(n):
        d = a[k][k]
        if d > 0:
            row_k = a[k]
            factors = []
            for i in range(k + 1, n):
                f = row_k[i] / d  # equals A[i][k] by symmetry; only the upper triangle is kept current
                if f:
                    row_i = a[i]
                    for j in range(i, n):
                        row_i[j] -= f * row_k[j]
                    factors.append((i, f))
            if factors:
                steps.append((k, factors))
        elif d < 0:
            w = [Q0] * n
            w[k] = Q1
            return pull_back(w)
        else:
            row_k = a[k]
            j = next((j for j in range(k + 1, n) if row_k[j] != 0), None)
            if j is None:
                continue
            # 2x2 principal block [[0, a], [a, b]] is indefinite: with
            # w = t*e_k + e_j and t = -(b+1)/(2a) the value is exactly -1.
            b = a[j][j]
            w = [Q0] * n
            w[k] = -(b + 1) / (2 * row_k[j])
            w[j] = Q1
            return pull_back(w)
    return None


def psd_certificate(m: Matrix) -> PsdOutcome:
    """Decide M >= 0 exactly; on failure return a witness with v^T M v < 0."""
    if not m.is_square() or not m.is_symmetric():
        raise ContractViolation("psd_certificate requires a symmetric matrix")
    w = _congruence_witness(m.data)
    if w is None:
        return PsdOutcome(True, None)
    return PsdOutcome(False, tuple(w))


def pd_pivots(m: Matrix) -> Optional[list]:
    """All n elimination pivots when M is positive definite, else None."""
    if not m.is_square() or not m.is_symmetric():
        raise ContractViolation("pd_pivots requires a symmetric matrix")
    n = m.rows
    a = m.copy_data()
    pivots = []
    for k in range(n):
        d = a[k][k]
        if d <= 0:
            return None
        pivots.append(d)
        row_k = a[k]
        for i in range(k + 1, n):
            f = row_k[i] / d  # upper-triangle elimination, see _congruence_witness
            if f:
                row_i = a[i]
                for j in range(i, n):
                    row_i[j] -= f * row_k[j]
    return pivots


def is_positive_definite(m: Matrix) -> bool:
    return pd_pivots(m) is not None


def bareiss_pd_det(rows: list) -> Optional["QQ"]:
    """det(M) when the symmetric matrix is positive definite, else None.

    Fraction-free integer elimination: the k-th pivot is the k-th leading
    principal minor of the denominator-cleared matrix, so all-positive
    pivots certify positive definiteness (Sylvester) without any rational
    normalization on the hot path. A nonpositive pivot (which includes the
    positive-semidefinite-but-singular case) returns None and callers fall
    back to the exact congruence scan.
    """
    n = len(rows)
    if n == 0:
        return Q1
    scale = 1
    for row in rows:
        for v in row:
            scale = math.lcm(scale, int(v.denominator))
    scale = _big(scale)
    a = [[(v * scale).numerator for v in row] for row in rows]
    prev = _big(1)
    piv = a[0][0]
    for k in range(n):
        piv = a[k][k]
        if piv <= 0:
            return None
        for i in range(k + 1, n):
            aik = a[i][k]
            row_i = a[i]
            row_k = a[k]
            for j in range(k + 1, n):
                row_i[j] = (piv * row_i[j] - aik * row_k[j]) // prev
        prev = piv
    return QQ(piv, scale ** n)


class Polynomial:
    """Univariate polynomial with rational coefficients, ascending order."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Sequence):
        cs = [as_q(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        self.coeffs = tuple(cs)

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1  # -1 for the zero polynomial

    def is_zero(self) -> bool:
        return not self.coeffs

    def leading(self):
        if self.is_zero():
            raise ContractViolation("zero polynomial has no leading coefficient")
        return self.coeffs[-1]

    def __eq__(self, other) -> bool:
        return isinstance(other, Polynomial) and self.coeffs == other.coeffs

    def __repr__(self) -> str:
        return f"Polynomial({[str(c) for c in self.coeffs]})"

    def eval(self, x):
        x = as_q(x)
        acc = Q0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def derivative(self) -> "Polynomial":
        return Polynomial([c * k for k, c in enumerate(self.coeffs)][1:])

    def scale(self, s) -> "Polynomial":
        s = as_q(s)
        return Polynomial([c * s for c in self.coeffs])


def poly_divmod(num: Polynomial, den: Polynomial):
    if den.is_zero():
        raise ContractViolation("polynomial division by zero")
    q = [Q0] * max(0, num.degree - den.degree + 1)
    rem = list(num.coeffs)
    d = den.degree
    lead = den.leading()
    while len(rem) - 1 >= d and any(c != 0 for c in rem):
        while rem and rem[-1] == 0:
            rem.pop()
        if len(rem) - 1 < d:
            break
        shift = len(rem) - 1 - d
        factor = rem[-1] / lead
        q[shift] = factor
        for i, c in enumerate(den.coeffs):
            rem[shift + i] -= factor * c
        rem.pop()
    return Polynomial(q), Polynomial(rem)


def poly_gcd(a: Polynomial, b: Polynomial) -> Polynomial:
    while not b.is_zero():
        _, r = poly_divmod(a, b)
        a, b = b, r
    if a.is_zero():
        return a
    return a.scale(1 / a.leading())


def char_poly(m: Matrix) -> Polynomial:
    """det(xI - M) via the Faddeev-LeVerrier recurrence, exactly."""
    if not m.is_square():
        raise ContractViolation("char_poly requires a square matrix")
    n = m.rows
    if n == 0:
        return Polynomial([Q1])
    coeffs_desc = [Q1]  # coefficient of x^n
    mk = m
    ck = -mk.trace()
    coeffs_desc.append(ck)
    for k in range(2, n + 1):
        mk = m.matmul(mk.shifted(ck))
        ck = -mk.trace() / k
        coeffs_desc.append(ck)
    return Polynomial(list(reversed(coeffs_desc)))


def solve_linear(m: Matrix, rhs: Sequence) -> Optional[list]:
    """Solve M x = rhs exactly; None when M is singular.

    Partial pivoting picks the largest-magnitude pivot (lowest row index on
    ties) so the routine is deterministic.
    """
    if not m.is_square() or m.rows != len(rhs):
        raise ContractViolation("solve_linear dimension mismatch")
    n = m.rows
    a = [row[:] + [as_q(b)] for row, b in zip(m.data, rhs)]
    for col in range(n):
        best, best_abs = None, Q0
        for i in range(col, n):
            v = a[i][col]
            mag = -v if v < 0 else v
            if mag > best_abs:
                best, best_abs = i, mag
        if best is None:
            return None
        if best != col:
            a[col], a[best] = a[best], a[col]
        piv = a[col][col]
        for i in range(col + 1, n):
            f = a[i][col] / piv
            if f:
                for j in range(col, n + 1):
                    a[i][j] -= f * a[col][j]
    x = [Q0] * n
    for i in range(n - 1, -1, -1):
        acc = a[i][n]
        for j in range(i + 1, n):
            acc -= a[i][j] * x[j]
        x[i] = acc / a[i][i]
    return x


def kernel_vector(m: Matrix) -> Optional[list]:
    """A nonzero exact kernel vector of M, or None when M is nonsingular."""
    if not m.is_square():
        raise ContractViolation("kernel_vector requires a square matrix")
    n = m.rows
    a = m.copy_data()
    pivot_cols: list[int] = []
    row = 0
    for col in range(n):
        best, best_abs = None, Q0
        for i in range(row, n):
            v = a[i][col]
            mag = -v if v < 0 else v
            if mag > best_abs:
                best, best_abs = i, mag
        if best is None:
            continue
        if best != row:
            a[row], a[best] = a[best], a[row]
        piv = a[row][col]
        for i in range(n):
            if i != row and a[i][col]:
                f = a[i][col] / piv
                for j in range(col, n):
                    a[i][j] -= f * a[row][j]
        pivot_cols.append(col)
        row += 1
        if row == n:
            return None
    free = next(c for c in range(n) if c not in pivot_cols)
    x = [Q0] * n
    x[free] = Q1
    for r, col in enumerate(pivot_cols):
        x[col] = -a[r][free] / a[r][col]
    if norm_sq(x) == 0:  # pragma: no cover - impossible by construction
        return None
    return x
