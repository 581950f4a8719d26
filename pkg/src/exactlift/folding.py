"""Symmetry reduction by folding coordinates along a partition.

An index map sends coordinates onto ordered classes; folding averages
within classes, almost-folding sums, unfolding replicates. Agreeing inner
products survive folding exactly, folded PSD matrices stay PSD (Gram
averaging), and folding never increases the Euclidean norm. The folded
optimizer runs the ellipsoid in class space, answers separation queries by
unfolding the candidate, and refines the partition whenever the underlying
oracle produces a cut whose values distinguish coordinates inside one
class; after at most one refinement per coordinate the map is injective and
the run degenerates to the plain solver.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, Optional, Sequence, Tuple

from ._ratio import QQ, Q0, as_q
from .ellipsoid import (SolveOptions, SolveResult, _as_pencil, _run_ellipsoid,
                        block_separation, plan_for)
from .errors import ContractViolation
from .linalg import Matrix, psd_certificate
from .sdp import BlockPencil


@dataclass(frozen=True)
class IndexMap:
    """Surjection from coordinate positions onto classes 0..k-1."""

    assignment: Tuple[int, ...]
    k: int

    def __post_init__(self):
        if sorted(set(self.assignment)) != list(range(self.k)):
            raise ContractViolation("index map must be surjective onto 0..k-1")

    @classmethod
    def from_assignment(cls, assignment: Sequence[int]) -> "IndexMap":
        return cls(tuple(assignment), max(assignment) + 1 if assignment else 0)

    @classmethod
    def trivial(cls, n: int) -> "IndexMap":
        return cls(tuple([0] * n), 1 if n else 0)

    @classmethod
    def identity(cls, n: int) -> "IndexMap":
        return cls(tuple(range(n)), n)

    @property
    def n(self) -> int:
        return len(self.assignment)

    def classes(self) -> Tuple[Tuple[int, ...], ...]:
        out = [[] for _ in range(self.k)]
        for pos, cls_ in enumerate(self.assignment):
            out[cls_].append(pos)
        return tuple(tuple(c) for c in out)

    def class_sizes(self) -> Tuple[int, ...]:
        sizes = [0] * self.k
        for cls_ in self.assignment:
            sizes[cls_] += 1
        return tuple(sizes)

    def is_injective(self) -> bool:
        return self.k == self.n

    def agrees(self, x: Sequence) -> bool:
        seen: Dict[int, object] = {}
        for pos, cls_ in enumerate(self.assignment):
            if cls_ in seen:
                if seen[cls_] != x[pos]:
                    return False
            else:
                seen[cls_] = x[pos]
        return True

    def refine_by(self, values: Sequence) -> "IndexMap":
        """Split classes by distinct values; new classes keep (class, value) order."""
        order = []
        for cls_, members in enumerate(self.classes()):
            by_value: Dict[object, list] = {}
            for pos in members:
                by_value.setdefault(values[pos], []).append(pos)
            for val in sorted(by_value.keys()):
                order.append(by_value[val])
        assignment = [0] * self.n
        for new_cls, members in enumerate(order):
            for pos in members:
                assignment[pos] = new_cls
        return IndexMap(tuple(assignment), len(order))


def almost_fold(x: Sequence, sigma: IndexMap) -> list:
    """Class sums."""
    if len(x) != sigma.n:
        raise ContractViolation("vector length does not match the index map")
    out = [Q0] * sigma.k
    for pos, cls_ in enumerate(sigma.assignment):
        out[cls_] += as_q(x[pos])
    return out


def fold_vector(x: Sequence, sigma: IndexMap) -> list:
    """Class averages."""
    sums = almost_fold(x, sigma)
    sizes = sigma.class_sizes()
    return [s / sz for s, sz in zip(sums, sizes)]


def unfold(x_hat: Sequence, sigma: IndexMap) -> list:
    """Replicate class values back onto coordinates."""
    if len(x_hat) != sigma.k:
        raise ContractViolation("folded vector length does not match the class count")
    vals = [as_q(v) for v in x_hat]
    return [vals[cls_] for cls_ in sigma.assignment]


def fold_matrix(x: Matrix, tau: IndexMap) -> Matrix:
    """Entry (i,j) averages X over class_i x class_j (consistent product map)."""
    if x.rows != tau.n or x.cols != tau.n:
        raise ContractViolation("matrix shape does not match the index map")
    classes = tau.classes()
    out = []
    for ci in classes:
        row = []
        for cj in classes:
            acc = Q0
            for u in ci:
                xu = x.data[u]
                for v in cj:
                    acc += xu[v]
            row.append(acc / (len(ci) * len(cj)))
        out.append(row)
    return Matrix(out)


def fold_psd_check(x: Matrix, tau: IndexMap) -> Matrix:
    """Fold a certified-PSD matrix; the result is again PSD (Gram averaging)."""
    if not x.is_symmetric():
        raise ContractViolation("fold_psd_check requires a symmetric matrix")
    if not psd_certificate(x).is_psd:
        raise ContractViolation("fold_psd_check requires a PSD input")
    return fold_matrix(x, tau)


def _initial_partition(objective: Sequence) -> IndexMap:
    """Group coordinates by objective value so the objective always agrees."""
    by_value: Dict[object, list] = {}
    for pos, v in enumerate(objective):
        by_value.setdefault(as_q(v), []).append(pos)
    order = [by_value[val] for val in sorted(by_value.keys())]
    assignment = [0] * len(objective)
    for cls_, members in enumerate(order):
        for pos in members:
            assignment[pos] = cls_
    return IndexMap(tuple(assignment), len(order))


class _RefineSignal(Exception):
    def __init__(self, gradient):
        super().__init__("cut disagrees with the index map")
        self.gradient = gradient


def folded_optimize(sdp, delta, radius, options: Optional[SolveOptions] = None) -> SolveResult:
    """Same contract as ellipsoid_optimize, solved in folded coordinate space.

    Separation queries unfold the candidate and ask the full-space block
    oracle; an agreeing cut folds to class space via class sums (the exact
    inner-product transfer), a disagreeing one refines the partition and
    restarts. Accepted points are recorded unfolded, so the returned point
    is a point of the original region's coordinate space.
    """
    pencil = _as_pencil(sdp)
    n = pencil.num_coords
    plan = plan_for(pencil, delta, radius, options)
    enlarged = pencil.enlarged(plan.eta)
    sigma = _initial_partition(pencil.objective)
    refinements = 0
    best: Optional[SolveResult] = None

    while True:
        result = _attempt_fold(enlarged, pencil.objective, sigma, plan)
        if isinstance(result, IndexMap):
            sigma = result
            refinements += 1
            if refinements > n:  # pragma: no cover - each refinement grows k
                raise ContractViolation("folding refinement failed to terminate")
            continue
        return SolveResult(result.status, result.value, result.point,
                           result.iterations, result.accepts, refinements=refinements,
                           radius_guard=result.radius_guard)


def _attempt_fold(enlarged: BlockPencil, objective, sigma: IndexMap, plan):
    """One folded ellipsoid run; returns a refined IndexMap or a SolveResult."""
    k = sigma.k
    folded_objective = almost_fold(objective, sigma)
    sizes = sigma.class_sizes()
    max_class = max(sizes) if sizes else 1
    from ._ratio import q_sqrt_ceil  # local import to avoid cycle noise
    folded_plan = type(plan)(
        n=k, radius=plan.radius, tau=plan.tau, eta=plan.eta,
        r_stop=plan.r_stop / q_sqrt_ceil(QQ(max_class)),
        budget=plan.budget, bits=plan.bits, pd_every=plan.pd_every,
        value_stop=plan.value_stop, trace_hook=plan.trace_hook,
    )
    def oracle(x_hat):
        x = unfold(x_hat, sigma)
        hit = block_separation(enlarged, x, plan.tau)
        if hit is None:
            return None
        bi, u = hit
        grad_sparse = enlarged.blocks[bi].witness_gradient(u)
        gamma = [Q0] * sigma.n
        for q, v in grad_sparse.items():
            gamma[q] = v
        if not sigma.agrees(gamma):
            raise _RefineSignal(gamma)
        return almost_fold(gamma, sigma)

    try:
        result = _run_ellipsoid(k, oracle, folded_objective, folded_plan)
    except _RefineSignal as sig:
        return sigma.refine_by(sig.gradient)

    if result.point is not None:
        point = tuple(unfold(list(result.point), sigma))
        return SolveResult(result.status, result.value, point, result.iterations,
                           result.accepts, radius_guard=result.radius_guard)
    return result
