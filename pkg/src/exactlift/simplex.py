"""Exact rational simplex for LPs of the form max <c,x> subject to Ax >= b.

Two-phase tableau method with Bland's anti-cycling rule (lowest eligible
column enters, lowest basic index leaves on ratio ties), so every run is
deterministic and terminating. A light presolve turns explicit x_v >= 0
rows into nonnegativity markers and merges complementary row pairs into
equality rows; both are exact reformulations that keep the tableau small.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

from ._ratio import QQ, Q0, Q1, as_q, dot
from .errors import ContractViolation
from .linalg import Matrix

OPTIMAL = "optimal"
INFEASIBLE = "infeasible"
UNBOUNDED = "unbounded"


@dataclass(frozen=True)
class LpResult:
    status: str
    x: Optional[tuple]
    value: Optional["QQ"]


def _presolve(a_rows: list, b: list, n: int):
    nonneg = [False] * n
    used = [False] * len(a_rows)
    ineqs: list = []
    eqs: list = []

    for idx, (row, rhs) in enumerate(zip(a_rows, b)):
        support = [j for j, v in enumerate(row) if v != 0]
        if len(support) == 1 and rhs == 0 and row[support[0]] > 0:
            nonneg[support[0]] = True
            used[idx] = True

    by_key = {}
    for idx, (row, rhs) in enumerate(zip(a_rows, b)):
        if used[idx]:
            continue
        by_key.setdefault((tuple(row), rhs), []).append(idx)
    for idx, (row, rhs) in enumerate(zip(a_rows, b)):
        if used[idx]:
            continue
        neg_key = (tuple(-v for v in row), -rhs)
        partners = by_key.get(neg_key, [])
        partner = next((p for p in partners if not used[p] and p != idx), None)
        if partner is not None:
            used[idx] = used[partner] = True
            eqs.append((row, rhs))
    for idx, (row, rhs) in enumerate(zip(a_rows, b)):
        if not used[idx]:
            ineqs.append((row, rhs))
    return nonneg, ineqs, eqs


class _Tableau:
    def __init__(self, rows: list, rhs: list, basis: list, ncols: int):
        self.t = rows          # m x ncols
        self.rhs = rhs         # m
        self.basis = basis     # m column indices
        self.ncols = ncols

    def pivot(self, r: int, j: int) -> None:
        piv = self.t[r][j]
        row = self.t[r]
        inv = 1 / piv
        for k in range(self.ncols):
            if row[k]:
                row[k] *= inv
        self.rhs[r] *= inv
        for i, other in enumerate(self.t):
            if i != r and other[j]:
                f = other[j]
                for k in range(self.ncols):
                    if row[k]:
                        other[k] -= f * row[k]
                self.rhs[i] -= f * self.rhs[r]
        self.basis[r] = j

    def run_bland(self, cost: list, allowed) -> str:
        """Maximize sum cost[j]*x_j over the current basis; mutates in place."""
        m = len(self.t)
        while True:
            entering = None
            for j in range(self.ncols):
                if not allowed[j] or j in self.basis:
                    continue
                rc = cost[j]
                for i in range(m):
                    cb = cost[self.basis[i]]
                    if cb and self.t[i][j]:
                        rc -= cb * self.t[i][j]
                if rc > 0:
                    entering = j
                    break
            if entering is None:
                return OPTIMAL
            leave, best_ratio = None, None
            for i in range(m):
                coef = self.t[i][entering]
                if coef > 0:
                    ratio = self.rhs[i] / coef
                    if (best_ratio is None or ratio < best_ratio
                            or (ratio == best_ratio and self.basis[i] < self.basis[leave])):
                        leave, best_ratio = i, ratio
            if leave is None:
                return UNBOUNDED
            self.pivot(leave, entering)

    def solution(self) -> list:
        vals = [Q0] * self.ncols
        for i, j in enumerate(self.basis):
            vals[j] = self.rhs[i]
        return vals


def lp_optimize(a: Matrix, b: Sequence, c: Sequence) -> LpResult:
    """Maximize <c, x> over {x | Ax >= b} with exact rational arithmetic."""
    if a.rows != len(b) or (a.rows > 0 and a.cols != len(c)):
        raise ContractViolation("lp_optimize dimension mismatch")
    n = len(c)
    a_rows = [[as_q(v) for v in row] for row in a.data]
    b_vec = [as_q(v) for v in b]
    c_vec = [as_q(v) for v in c]

    nonneg, ineqs, eqs = _presolve(a_rows, b_vec, n)

    # structural columns: x_v+ always, x_v- only for possibly-negative vars
    plus_col = [0] * n
    minus_col: list = [None] * n
    ncols = 0
    for v in range(n):
        plus_col[v] = ncols
        ncols += 1
        if not nonneg[v]:
            minus_col[v] = ncols
            ncols += 1
    first_slack = ncols
    ncols += len(ineqs)

    rows: list = []
    rhs: list = []

    def structural(row_coeffs) -> list:
        out = [Q0] * ncols
        for v, coef in enumerate(row_coeffs):
            if coef:
                out[plus_col[v]] = coef
                if minus_col[v] is not None:
                    out[minus_col[v]] = -coef
        return out

    for k, (row_coeffs, rh) in enumerate(ineqs):
        out = structural(row_coeffs)
        out[first_slack + k] = QQ(-1)  # surplus: Ax - s = b
        rows.append(out)
        rhs.append(rh)
    for row_coeffs, rh in eqs:
        rows.append(structural(row_coeffs))
        rhs.append(rh)

    m = len(rows)
    for i in range(m):
        if rhs[i] < 0:
            rows[i] = [-v for v in rows[i]]
            rhs[i] = -rhs[i]

    # initial basis: a +1 single-entry slack column when available, else artificial
    basis: list = [None] * m
    art_cols: list = []
    for i in range(m):
        cand = None
        for j in range(first_slack, first_slack + len(ineqs)):
            if rows[i][j] == 1 and all(rows[k][j] == 0 for k in range(m) if k != i):
                cand = j
                break
        if cand is not None:
            basis[i] = cand
    total_cols = ncols + sum(1 for i in range(m) if basis[i] is None)
    for i in range(m):
        rows[i] = rows[i] + [Q0] * (total_cols - ncols)
    nxt = ncols
    for i in range(m):
        if basis[i] is None:
            rows[i][nxt] = Q1
            basis[i] = nxt
            art_cols.append(nxt)
            nxt += 1

    tab = _Tableau(rows, rhs, basis, total_cols)
    allowed = [True] * total_cols

    if art_cols:
        phase1_cost = [Q0] * total_cols
        for j in art_cols:
            phase1_cost[j] = QQ(-1)
        tab.run_bland(phase1_cost, allowed)
        art_set = set(art_cols)
        if any(tab.rhs[i] != 0 for i in range(m) if tab.basis[i] in art_set):
            return LpResult(INFEASIBLE, None, None)
        # drive degenerate artificials out of the basis or drop redundant rows
        drop = []
        for i in range(m):
            if tab.basis[i] in art_set:
                j = next((j for j in range(ncols) if tab.t[i][j] != 0), None)
                if j is None:
                    drop.append(i)
                else:
                    tab.pivot(i, j)
        for i in reversed(drop):
            del tab.t[i], tab.rhs[i], tab.basis[i]
        for j in art_cols:
            allowed[j] = False

    phase2_cost = [Q0] * total_cols
    for v in range(n):
        if c_vec[v]:
            phase2_cost[plus_col[v]] = c_vec[v]
            if minus_col[v] is not None:
                phase2_cost[minus_col[v]] = -c_vec[v]
    status = tab.run_bland(phase2_cost, allowed)
    if status == UNBOUNDED:
        return LpResult(UNBOUNDED, None, None)

    vals = tab.solution()
    x = []
    for v in range(n):
        xv = vals[plus_col[v]]
        if minus_col[v] is not None:
            xv -= vals[minus_col[v]]
        x.append(xv)
    return LpResult(OPTIMAL, tuple(x), dot(c_vec, x))
