"""Moment-matrix lift of a 0-1 LP to its level-t SDP.

Subsets of the LP variables (size at most 2t+1) index the lifted
coordinates; the moment block has entry y_{I union J} and each LP row u
contributes a slack block with entries sum_v A_{u,v} y_{I+J+v} - b_u y_{I+J}.
The empty set's coordinate is eliminated by substituting y_empty = 1 into the
constant part of the pencil, so the result is a clean inequality-form SDP.
Subsets are bitmasks over variable positions, ordered by size then
lexicographically; unions are single OR instructions.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Dict, Sequence, Tuple

from ._ratio import QQ, Q0, Q1, as_q
from .encode import ZeroOneLP
from .errors import CapExceeded, ContractViolation
from .linalg import Matrix
from .sdp import BlockPencil, PencilBlock

DEFAULT_COORD_GUARD = 50_000


@dataclass(frozen=True)
class SubsetIndex:
    """All subsets of the base variables with size <= bound, canonical order."""

    varnames: Tuple[str, ...]
    bound: int
    masks: Tuple[int, ...]

    @classmethod
    def build(cls, varnames: Sequence[str], bound: int) -> "SubsetIndex":
        n = len(varnames)
        k = min(bound, n)
        masks = []
        for size in range(k + 1):
            for combo in itertools.combinations(range(n), size):
                mask = 0
                for p in combo:
                    mask |= 1 << p
                masks.append(mask)
        return cls(tuple(varnames), bound, tuple(masks))

    def __len__(self) -> int:
        return len(self.masks)

    def position(self) -> Dict[int, int]:
        return {m: i for i, m in enumerate(self.masks)}

    def mask_of(self, subset: Sequence[str]) -> int:
        mask = 0
        for name in subset:
            mask |= 1 << self.varnames.index(name)
        return mask

    def names_of(self, mask: int) -> Tuple[str, ...]:
        return tuple(name for p, name in enumerate(self.varnames) if (mask >> p) & 1)


def subset_index(varnames: Sequence[str], bound: int) -> SubsetIndex:
    if bound < 0:
        raise ContractViolation("subset bound must be nonnegative")
    return SubsetIndex.build(varnames, bound)


def coordinate_count(num_vars: int, level: int) -> int:
    """|subsets of size <= min(2t+1, n)| without materializing them."""
    k = min(2 * level + 1, num_vars)
    total = 0
    binom = 1
    for size in range(k + 1):
        total += binom
        binom = binom * (num_vars - size) // (size + 1)
    return total


@dataclass(frozen=True)
class MomentVector:
    """Values y_S per subset S of size <= 2t+1, with y_empty = 1 when feasible."""

    level: int
    index: SubsetIndex
    values: Tuple["QQ", ...]

    def __post_init__(self):
        if len(self.values) != len(self.index):
            raise ContractViolation("moment vector length does not match its subset index")

    def lookup(self, mask: int) -> "QQ":
        try:
            return self.values[self.index.position()[mask]]
        except KeyError as exc:
            raise ContractViolation(f"subset mask {mask} outside the index") from exc


def _moment_index(varnames: Sequence[str], level: int) -> SubsetIndex:
    return subset_index(varnames, 2 * level + 1)


def rank_one_lift(x: Sequence, varnames: Sequence[str], level: int) -> MomentVector:
    """y_S = prod_{v in S} x_v for a 0-1 point x; the canonical feasible lift."""
    vals = [as_q(v) for v in x]
    if any(v != 0 and v != 1 for v in vals):
        raise ContractViolation("rank_one_lift requires a 0-1 point")
    support = 0
    for p, v in enumerate(vals):
        if v == 1:
            support |= 1 << p
    index = _moment_index(varnames, level)
    values = tuple(Q1 if (mask & ~support) == 0 else Q0 for mask in index.masks)
    return MomentVector(level, index, values)


def project(y: MomentVector) -> Tuple["QQ", ...]:
    """The singleton coordinates (y_{v})_v, in variable order."""
    pos = y.index.position()
    return tuple(y.values[pos[1 << p]] for p in range(len(y.index.varnames)))


def moment_matrix(y: MomentVector, level: int) -> Matrix:
    """M_t(y)[I, J] = y_{I union J} over subsets of size <= t."""
    if 2 * level > 2 * y.level + 1:
        raise ContractViolation("moment vector does not cover unions of this level")
    pos = y.index.position()
    row_masks = [m for m in y.index.masks if bin(m).count("1") <= level]
    vals = y.values
    out = []
    for mi in row_masks:
        row = []
        for mj in row_masks:
            row.append(vals[pos[mi | mj]])
        out.append(row)
    return Matrix(out)


def slack_matrix(y: MomentVector, a_row: Sequence, b_u, level: int) -> Matrix:
    """Moment matrix of the slack of one LP row: sum_v A_v y_{I+J+v} - b y_{I+J}."""
    if level > y.level:
        raise ContractViolation("moment vector does not cover unions of this level")
    pos = y.index.position()
    row_masks = [m for m in y.index.masks if bin(m).count("1") <= level]
    coeffs = [(p, as_q(v)) for p, v in enumerate(a_row) if v]
    b_u = as_q(b_u)
    vals = y.values
    out = []
    for mi in row_masks:
        row = []
        for mj in row_masks:
            base = mi | mj
            acc = -b_u * vals[pos[base]]
            for p, coef in coeffs:
                acc += coef * vals[pos[base | (1 << p)]]
            row.append(acc)
        out.append(row)
    return Matrix(out)


@dataclass(frozen=True)
class SdpPencil:
    """Level-t lift of a 0-1 LP as a block pencil over nonempty subsets.

    Block 0 is the moment block; block u+1 is the slack block of LP row u.
    The objective places the LP objective on singleton coordinates.
    """

    level: int
    lp: ZeroOneLP
    index: SubsetIndex
    pencil: BlockPencil

    @property
    def coords(self) -> Tuple[str, ...]:
        return self.pencil.coord_names

    @property
    def num_coords(self) -> int:
        return self.pencil.num_coords

    def moment_vector(self, x: Sequence) -> MomentVector:
        """Reattach y_empty = 1 to a coordinate vector of this pencil."""
        return MomentVector(self.level, self.index, (Q1,) + tuple(as_q(v) for v in x))

    def coordinates_of(self, y: MomentVector) -> list:
        if y.index.masks != self.index.masks:
            raise ContractViolation("moment vector indexed differently from the pencil")
        if y.values[0] != 1:
            raise ContractViolation("pencil coordinates require y_empty = 1")
        return list(y.values[1:])

    def project_point(self, x: Sequence) -> Tuple["QQ", ...]:
        return project(self.moment_vector(x))


def lift(lp: ZeroOneLP, level: int, coord_guard: int = DEFAULT_COORD_GUARD) -> SdpPencil:
    """The level-t moment SDP of {x in {0,1}^n | Ax >= b} in pencil form."""
    if level < 1:
        raise ContractViolation("lift is defined for level >= 1 (level 0 is the LP itself)")
    n = lp.num_vars
    count = coordinate_count(n, level)
    if count > coord_guard:
        raise CapExceeded(
            f"level-{level} lift needs {count} coordinates; guard is {coord_guard}"
        )
    index = _moment_index(lp.names, level)
    pos = index.position()
    row_masks = [m for m in index.masks if bin(m).count("1") <= level]
    mdim = len(row_masks)

    def coord(mask: int) -> int:
        return pos[mask] - 1  # coordinates skip the empty set

    def mirrored(upper: list) -> list:
        for i in range(mdim):
            for j in range(i):
                upper[i][j] = upper[j][i]
        return upper

    moment_const = [[Q0] * mdim for _ in range(mdim)]
    moment_coef: Dict[int, list] = {}
    for i, mi in enumerate(row_masks):
        for j in range(i, mdim):
            union = mi | row_masks[j]
            if union == 0:
                moment_const[i][j] = Q1  # y_empty substituted
            else:
                moment_coef.setdefault(coord(union), []).append((i, j, Q1))
    blocks = [PencilBlock(mdim, mirrored(moment_const), moment_coef)]

    for a_row, b_u in zip(lp.a.data, lp.b):
        support = [(p, a_row[p]) for p in range(n) if a_row[p]]
        const = [[Q0] * mdim for _ in range(mdim)]
        coef: Dict[int, list] = {}
        for i, mi in enumerate(row_masks):
            for j in range(i, mdim):
                base = mi | row_masks[j]
                terms: Dict[int, "QQ"] = {}
                constant = Q0
                if b_u:
                    if base == 0:
                        constant -= b_u
                    else:
                        terms[coord(base)] = terms.get(coord(base), Q0) - b_u
                for p, av in support:
                    tgt = coord(base | (1 << p))
                    terms[tgt] = terms.get(tgt, Q0) + av
                const[i][j] = constant
                for q, v in terms.items():
                    if v:
                        coef.setdefault(q, []).append((i, j, v))
        blocks.append(PencilBlock(mdim, mirrored(const), coef))

    objective = [Q0] * (len(index) - 1)
    for p in range(n):
        if lp.c[p]:
            objective[coord(1 << p)] = lp.c[p]
    coord_names = ["&".join(index.names_of(m)) for m in index.masks[1:]]
    pencil = BlockPencil(coord_names, objective, blocks)
    return SdpPencil(level, lp, index, pencil)
