"""Sliding-objective central-cut ellipsoid method over exact rationals.

The solver works on block pencils: per iteration it either certifies the
center strictly feasible (every block minus a small threshold passes the
exact PSD test) and cuts off the worse-objective half, or it turns the PSD
witness direction of a failing block into a central cut. Shape updates are
exact rationals rounded to a fixed dyadic grid and inflated to preserve
containment; the exact determinant of the shape matrix certifies when no
ball of the stopping radius survives, which distinguishes a proven empty
region (no accepts) and a delta-maximal best point (some accept) from plain
budget exhaustion.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional, Sequence, Tuple

from ._ratio import (QQ, Q0, Q1, as_q, dot, norm_sq, q_round_dyadic, q_sqrt_ceil,
                     q_sqrt_upper)
from .errors import ContractViolation, SolverDegeneracy
from .linalg import Matrix, bareiss_pd_det
from .linalg import _congruence_witness  # exact PSD scan on raw rows
from .sdp import BlockPencil, InequalitySDP, objective_norm_cap

OPTIMAL = "optimal"
EMPTY = "empty"
BUDGET_EXHAUSTED = "budget_exhausted"


@dataclass(frozen=True)
class SolveOptions:
    budget: Optional[int] = None
    precision_bits: Optional[int] = None
    pd_check_every: Optional[int] = None
    trace_hook: Optional[Callable] = None  # called with EllipsoidState after each update


@dataclass(frozen=True)
class SolveResult:
    status: str
    value: Optional["QQ"]
    point: Optional[Tuple["QQ", ...]]
    iterations: int
    accepts: int
    refinements: int = 0
    radius_guard: bool = False

    @property
    def found(self) -> bool:
        return self.value is not None


@dataclass(frozen=True)
class EllipsoidState:
    """Center, shape and progress of one run; shape stays positive definite."""

    center: Tuple["QQ", ...]
    shape: Matrix
    iteration: int
    best_point: Optional[Tuple["QQ", ...]]
    best_value: Optional["QQ"]


def _ln_upper(q) -> int:
    """Integer upper bound on ln(q) for q >= 1, via bit length (ln 2 < 0.7)."""
    q = as_q(q)
    if q <= 1:
        return 1
    n = -(-int(q.numerator) // int(q.denominator))  # ceil
    return (n.bit_length() * 7) // 10 + 1


def _log2_upper(q) -> int:
    q = as_q(q)
    if q <= 1:
        return 1
    n = -(-int(q.numerator) // int(q.denominator))
    return n.bit_length()


@dataclass(frozen=True)
class _Plan:
    n: int
    radius: "QQ"
    tau: "QQ"           # strict-feasibility threshold for block acceptance
    eta: "QQ"           # interior-creating enlargement added to every block
    r_stop: "QQ"        # certified stopping ball radius
    budget: int
    bits: int           # dyadic rounding grid
    pd_every: int
    value_stop: "QQ" = Q0   # stop once c^T P c at an accept falls below this
    trace_hook: Optional[Callable] = None


def plan_for(pencil: BlockPencil, delta, radius, options: Optional[SolveOptions] = None) -> _Plan:
    delta = as_q(delta)
    radius = as_q(radius)
    if delta <= 0 or radius <= 0:
        raise ContractViolation("delta and radius must be positive")
    n = pencil.num_coords
    cmax = objective_norm_cap(pencil.objective)
    delta_half = delta / 2
    delta_oracle = delta_half / (8 * cmax * (1 + radius))
    sdim = q_sqrt_ceil(QQ(max(1, pencil.total_dim())))
    eta = delta_half / (sdim * cmax)
    if eta < 4 * delta_oracle:
        eta = 4 * delta_oracle
    tau = delta_oracle / 2
    snorm = q_sqrt_ceil(pencil.coef_norm_sq_total())
    if snorm < 1:
        snorm = Q1
    r_stop = eta / (2 * snorm)
    alt = delta / (4 * cmax)
    if alt < r_stop:
        r_stop = alt
    bits = max(64, 8 * _log2_upper(QQ(max(1, n)) * radius / delta))
    budget = 8 * n * n * _ln_upper(4 * radius * max(1, n) / delta_oracle) + 64
    opts = options or SolveOptions()
    if opts.budget is not None:
        budget = opts.budget
    if opts.precision_bits is not None:
        bits = opts.precision_bits
    pd_every = opts.pd_check_every if opts.pd_check_every is not None else (1 if n <= 12 else 8)
    value_stop = (delta / 2) ** 2
    return _Plan(n, radius, tau, eta, r_stop, budget, bits, pd_every, value_stop,
                 opts.trace_hook)


_WITNESS_BITS = 32


def _compact_witness(shifted_rows: list, u: list) -> list:
    """Round a PSD-violation witness to a short rational, exactly re-checked.

    Witnesses from the elimination carry pivot-product denominators that
    would bloat every later ellipsoid update; a dyadic approximation almost
    always still violates, and the exact quadratic form check guarantees we
    never emit an invalid one.
    """
    scale = max((abs(v) for v in u), default=Q0)
    if scale == 0:
        return u
    # power-of-two normalization keeps the direction exact
    exp = (int(scale.numerator).bit_length() - int(scale.denominator).bit_length())
    factor = QQ(1, 1 << exp) if exp >= 0 else QQ(1 << -exp, 1)
    candidate = [q_round_dyadic(v * factor, _WITNESS_BITS) for v in u]
    n = len(u)
    acc = Q0
    for i in range(n):
        ci = candidate[i]
        if ci:
            row = shifted_rows[i]
            for j in range(n):
                if candidate[j]:
                    acc += ci * row[j] * candidate[j]
    return candidate if acc < 0 else u


def block_separation(pencil: BlockPencil, x: Sequence, tau):
    """None when every block is >= tau*I at x; else (block index, witness u)."""
    for bi, block in enumerate(pencil.blocks):
        w = block.eval(x)
        for i in range(block.dim):
            w[i][i] -= tau
        if bareiss_pd_det(w) is not None:
            continue  # strictly feasible block, certified without rationals
        witness = _congruence_witness(w)
        if witness is not None:
            return bi, _compact_witness(w, witness)
    return None


class _RefineSignal(Exception):
    """Raised by a folded oracle when a cut disagrees with the index map."""

    def __init__(self, gradient):
        super().__init__("partition refinement required")
        self.gradient = gradient


def _interval_optimize(oracle: Callable, objective, plan: _Plan) -> SolveResult:
    """One-coordinate runs degenerate to bisection with the same oracle."""
    c = objective[0]
    lo, hi = -plan.radius, plan.radius
    best_x = best_val = None
    accepts = 0
    it = 0
    while it < plan.budget:
        if hi - lo < 2 * plan.r_stop:
            if best_x is None:
                return SolveResult(EMPTY, None, None, it, accepts)
            return SolveResult(OPTIMAL, best_val, (best_x,), it, accepts)
        it += 1
        mid = (lo + hi) / 2
        outcome = oracle([mid])
        if outcome is None:
            accepts += 1
            val = c * mid
            if best_val is None or val > best_val:
                best_x, best_val = mid, val
            if c == 0:
                return SolveResult(OPTIMAL, Q0, (mid,), it, accepts)
            if c > 0:
                lo = mid
            else:
                hi = mid
        else:
            g = outcome
            if g[0] == 0:
                return SolveResult(EMPTY, None, None, it, accepts)
            if g[0] > 0:
                lo = mid  # keep {x : g*x >= g*mid}
            else:
                hi = mid
    return SolveResult(BUDGET_EXHAUSTED, best_val, (best_x,) if best_x is not None else None,
                       it, accepts)


def _run_ellipsoid(n: int, oracle: Callable, objective, plan: _Plan) -> SolveResult:
    """oracle(x) -> None (accept) or a keep-side gradient g ({<g,x> >= <g,center>}).

    A zero gradient is an exact certificate that no point satisfies the
    violated block, hence emptiness.
    """
    objective = [as_q(v) for v in objective]
    if n == 0:
        # constant region: a single oracle call decides feasibility
        outcome = oracle([])
        if outcome is None:
            return SolveResult(OPTIMAL, Q0, (), 1, 1)
        return SolveResult(EMPTY, None, None, 1, 0)
    if n == 1:
        return _interval_optimize(oracle, objective, plan)

    r2 = plan.radius * plan.radius
    shape = [[r2 if i == j else Q0 for j in range(n)] for i in range(n)]
    center = [Q0] * n
    best_x = best_val = None
    accepts = 0
    zero_objective = all(v == 0 for v in objective)
    stop_det = plan.r_stop ** (2 * n)
    inflate = 1 + QQ(1, 1 << (plan.bits // 2))
    kappa = QQ(n * n, n * n - 1)
    beta = QQ(2, n + 1)

    it = 0
    while it < plan.budget:
        it += 1
        outcome = oracle(center)
        accepted = outcome is None
        if accepted:
            accepts += 1
            val = dot(objective, center)
            if best_val is None or val > best_val:
                best_x, best_val = list(center), val
            if zero_objective:
                return SolveResult(OPTIMAL, Q0, tuple(center), it, accepts)
            g = [-v for v in objective]  # keep the better-objective half
        else:
            g = outcome
            if all(v == 0 for v in g):
                return SolveResult(EMPTY, None, None, it, accepts)
            g = [-v for v in g]  # oracle reports keep {<gamma,x> >= ...}; cut wants <=

        pg = [dot(row, g) for row in shape]
        q = dot(g, pg)
        if q <= 0:
            raise SolverDegeneracy("ellipsoid shape lost definiteness (q <= 0)")
        if accepted and q <= plan.value_stop:
            # every surviving point's value is within sqrt(q) <= delta/2 of the
            # just-recorded center, so the best point is already delta-maximal
            guard = norm_sq(best_x) >= (plan.radius * QQ(7, 8)) ** 2
            return SolveResult(OPTIMAL, best_val, tuple(best_x), it, accepts,
                               radius_guard=guard)
        root = q_sqrt_upper(q, 32)
        step = QQ(1, n + 1) / root
        center = [q_round_dyadic(z - step * v, plan.bits) for z, v in zip(center, pg)]
        coef = beta / q
        for i in range(n):
            pgi = pg[i]
            row = shape[i]
            for j in range(i, n):
                val_ij = kappa * (row[j] - coef * pgi * pg[j]) * inflate
                val_ij = q_round_dyadic(val_ij, plan.bits)
                row[j] = val_ij
            for j in range(i):
                row[j] = shape[j][i]
        if plan.trace_hook is not None:
            plan.trace_hook(EllipsoidState(tuple(center), Matrix(shape), it,
                                           tuple(best_x) if best_x is not None else None,
                                           best_val))
        if it % plan.pd_every == 0:
            det = bareiss_pd_det(shape)
            if det is None:
                raise SolverDegeneracy("ellipsoid shape lost positive definiteness")
            if det < stop_det:
                if best_x is None:
                    return SolveResult(EMPTY, None, None, it, accepts)
                guard = norm_sq(best_x) >= (plan.radius * QQ(7, 8)) ** 2
                return SolveResult(OPTIMAL, best_val, tuple(best_x), it, accepts,
                                   radius_guard=guard)
    guard = best_x is not None and norm_sq(best_x) >= (plan.radius * QQ(7, 8)) ** 2
    return SolveResult(BUDGET_EXHAUSTED, best_val,
                       tuple(best_x) if best_x is not None else None, it, accepts,
                       radius_guard=guard)


def _pencil_oracle(pencil: BlockPencil, tau) -> Callable:
    def oracle(x):
        hit = block_separation(pencil, x, tau)
        if hit is None:
            return None
        bi, u = hit
        grad = pencil.blocks[bi].witness_gradient(u)
        g = [Q0] * pencil.num_coords
        for q, v in grad.items():
            g[q] = v
        return g
    return oracle


def _as_pencil(sdp) -> BlockPencil:
    if isinstance(sdp, BlockPencil):
        return sdp
    if isinstance(sdp, InequalitySDP):
        return sdp.as_pencil()
    pencil = getattr(sdp, "pencil", None)
    if isinstance(pencil, BlockPencil):
        return pencil
    raise ContractViolation(f"cannot solve object of type {type(sdp).__name__}")


def ellipsoid_optimize(sdp, delta, radius, options: Optional[SolveOptions] = None) -> SolveResult:
    """delta-close, delta-maximal point of an inequality-form SDP within B(0, radius).

    The region is first enlarged to have interior (so boundary optima of the
    original region become acceptable), and the separation threshold is set
    low enough that the enlargement plus oracle slack stays below delta.
    """
    pencil = _as_pencil(sdp)
    plan = plan_for(pencil, delta, radius, options)
    enlarged = pencil.enlarged(plan.eta)
    oracle = _pencil_oracle(enlarged, plan.tau)
    return _run_ellipsoid(pencil.num_coords, oracle, pencil.objective, plan)
