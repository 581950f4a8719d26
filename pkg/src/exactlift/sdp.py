"""SDP standard forms, the weak separation oracle, and exact rounding.

Conic form keeps an explicit PSD matrix variable with trace-inner-product
rows; inequality form is an affine matrix pencil over scalar coordinates.
The weak separation oracle follows the classic recipe: aggregate every
violated linear row into one cut (no arbitrary choice), otherwise consult a
guaranteed-precision smallest-eigenvalue bound and turn an approximate
eigenvector into a rank-one cut. All separators are rescaled to exact
infinity-norm one; the eigen route therefore runs at an internally reduced
tolerance so the rescaled inequality still carries the caller's delta.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, Optional, Sequence, Tuple

from ._ratio import QQ, Q0, Q1, as_q, norm_sq, q_floor, q_sqrt_ceil
from .eigen import approx_eigenvector, approx_min_eigenvalue
from .errors import ContractViolation
from .linalg import Matrix, outer

ACCEPT = "accept"
SEPARATE = "separator"
EMPTY_ROWS = "empty_rows"  # aggregated violated rows cancel: constant infeasibility


# ---------------------------------------------------------------------------
# block pencils (shared by inequality-form SDPs and moment-matrix lifts)
# ---------------------------------------------------------------------------

class PencilBlock:
    """One symmetric block of an affine pencil: const + sum_q x_q * coef[q].

    `coef` maps a coordinate position to its upper-triangle entries
    (i, j, value) with i <= j; the lower triangle is implied.
    """

    __slots__ = ("dim", "const", "coef")

    def __init__(self, dim: int, const, coef: Dict[int, tuple]):
        self.dim = dim
        self.const = tuple(tuple(as_q(v) for v in row) for row in const)
        self.coef = {q: tuple((i, j, as_q(v)) for i, j, v in entries)
                     for q, entries in coef.items() if entries}

    def eval(self, x: Sequence) -> list:
        w = [list(row) for row in self.const]
        for q, entries in self.coef.items():
            xq = x[q]
            if xq:
                for i, j, v in entries:
                    t = xq * v
                    w[i][j] += t
                    if i != j:
                        w[j][i] += t
        return w

    def coef_matrix(self, q: int) -> Matrix:
        m = [[Q0] * self.dim for _ in range(self.dim)]
        for i, j, v in self.coef.get(q, ()):
            m[i][j] += v
            if i != j:
                m[j][i] += v
        return Matrix(m)

    def coef_norm_sq(self, q: int):
        total = Q0
        for i, j, v in self.coef.get(q, ()):
            total += v * v if i == j else 2 * v * v
        return total

    def witness_gradient(self, u: Sequence) -> Dict[int, "QQ"]:
        """gamma_q = u^T Y_q u over this block's coordinates (sparse)."""
        grad: Dict[int, "QQ"] = {}
        for q, entries in self.coef.items():
            acc = Q0
            for i, j, v in entries:
                acc += u[i] * v * u[j] * (1 if i == j else 2)
            if acc:
                grad[q] = acc
        return grad


class BlockPencil:
    """Inequality-form feasible region {x | all blocks of the pencil PSD}."""

    __slots__ = ("coord_names", "objective", "blocks")

    def __init__(self, coord_names: Sequence[str], objective: Sequence, blocks: Sequence[PencilBlock]):
        self.coord_names = tuple(coord_names)
        self.objective = tuple(as_q(v) for v in objective)
        if len(self.objective) != len(self.coord_names):
            raise ContractViolation("objective length != coordinate count")
        self.blocks = tuple(blocks)

    @property
    def num_coords(self) -> int:
        return len(self.coord_names)

    def total_dim(self) -> int:
        return sum(b.dim for b in self.blocks)

    def eval_blocks(self, x: Sequence) -> list:
        return [b.eval(x) for b in self.blocks]

    def block_matrix(self, block_index: int, x: Sequence) -> Matrix:
        return Matrix(self.blocks[block_index].eval(x))

    def coef_norm_sq_total(self):
        total = Q0
        for b in self.blocks:
            for q in b.coef:
                total += b.coef_norm_sq(q)
        return total

    def enlarged(self, eta) -> "BlockPencil":
        """Relax every block to block + eta*I (interior-creating enlargement)."""
        eta = as_q(eta)
        blocks = []
        for b in self.blocks:
            const = [list(row) for row in b.const]
            for i in range(b.dim):
                const[i][i] += eta
            nb = PencilBlock.__new__(PencilBlock)
            nb.dim = b.dim
            nb.const = tuple(tuple(row) for row in const)
            nb.coef = b.coef
            blocks.append(nb)
        return BlockPencil(self.coord_names, self.objective, blocks)


# ---------------------------------------------------------------------------
# standard forms
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ConicSDP:
    """max <C,X> over {X symmetric | X + psd_shift*I >= 0, <A_i,X> <= b_i}."""

    dim: int
    constraints: Tuple[Matrix, ...]
    rhs: Tuple["QQ", ...]
    objective: Matrix
    psd_shift: "QQ" = Q0

    def __post_init__(self):
        for a in self.constraints:
            if a.rows != self.dim or not a.is_symmetric():
                raise ContractViolation("constraint matrices must be symmetric dim x dim")
        if len(self.constraints) != len(self.rhs):
            raise ContractViolation("constraint/rhs count mismatch")
        if self.objective.rows != self.dim or not self.objective.is_symmetric():
            raise ContractViolation("objective matrix must be symmetric dim x dim")


@dataclass(frozen=True)
class InequalitySDP:
    """max <c,x> over {x | Z + sum_v x_v * Y_v >= 0}."""

    coord_names: Tuple[str, ...]
    z: Matrix
    coeffs: Tuple[Matrix, ...]
    c: Tuple["QQ", ...]
    block_dims: Tuple[int, ...] = ()

    def __post_init__(self):
        if len(self.coeffs) != len(self.coord_names) or len(self.c) != len(self.coord_names):
            raise ContractViolation("coordinate count mismatch")
        if not self.z.is_symmetric():
            raise ContractViolation("Z must be symmetric")
        for y in self.coeffs:
            if y.rows != self.z.rows or not y.is_symmetric():
                raise ContractViolation("coefficient matrices must be symmetric and match Z")
        dims = self.block_dims if self.block_dims else (self.z.rows,)
        if sum(dims) != self.z.rows:
            raise ContractViolation("block dimensions do not tile Z")

    def as_pencil(self) -> BlockPencil:
        dims = self.block_dims if self.block_dims else (self.z.rows,)
        blocks = []
        offset = 0
        for d in dims:
            const = [[self.z.data[offset + i][offset + j] for j in range(d)] for i in range(d)]
            coef: Dict[int, list] = {}
            for q, y in enumerate(self.coeffs):
                entries = []
                for i in range(d):
                    for j in range(i, d):
                        v = y.data[offset + i][offset + j]
                        if v:
                            entries.append((i, j, v))
                if entries:
                    coef[q] = entries
            blocks.append(PencilBlock(d, const, coef))
            offset += d
        return BlockPencil(self.coord_names, self.c, blocks)


def _sym_pair_names(dim: int):
    return [f"e:{u},{v}" for u in range(dim) for v in range(u, dim)]


def conic_to_inequality(sdp: ConicSDP) -> InequalitySDP:
    """Entries of X become scalar coordinates; rows become 1x1 slack blocks."""
    dim = sdp.dim
    pairs = [(u, v) for u in range(dim) for v in range(u, dim)]
    m = len(sdp.constraints)
    total = dim + m
    znew = [[Q0] * total for _ in range(total)]
    for i in range(dim):
        znew[i][i] = sdp.psd_shift
    for k, b in enumerate(sdp.rhs):
        znew[dim + k][dim + k] = b
    coeffs = []
    cvec = []
    for (u, v) in pairs:
        y = [[Q0] * total for _ in range(total)]
        y[u][v] += Q1
        y[v][u] += Q1
        if u == v:
            y[u][u] = Q1
        for k, a in enumerate(sdp.constraints):
            y[dim + k][dim + k] = -(a.data[u][v] + a.data[v][u]) if u != v else -a.data[u][u]
        coeffs.append(Matrix(y))
        cv = sdp.objective.data[u][v] + sdp.objective.data[v][u] if u != v else sdp.objective.data[u][u]
        cvec.append(cv)
    block_dims = (dim,) + (1,) * m
    return InequalitySDP(tuple(_sym_pair_names(dim)), Matrix(znew), tuple(coeffs), tuple(cvec), block_dims)


def inequality_to_conic(sdp: InequalitySDP) -> ConicSDP:
    """Free scalars become differences of two PSD diagonal entries.

    W = blockdiag(S, P, Q) with S forced entrywise to Z + sum_v (P_vv - Q_vv) Y_v.
    The map x -> W is a value-preserving embedding and W -> x a value-preserving
    surjection, so optima coincide; the size grows by 2 * #coordinates.
    """
    m = sdp.z.rows
    n = len(sdp.coord_names)
    total = m + 2 * n
    constraints = []
    rhs = []
    for a in range(m):
        for b in range(a, m):
            row = [[Q0] * total for _ in range(total)]
            if a == b:
                row[a][a] = Q1
            else:
                row[a][b] = QQ(1, 2)
                row[b][a] = QQ(1, 2)
            for v, y in enumerate(sdp.coeffs):
                yab = y.data[a][b]
                if yab:
                    row[m + v][m + v] -= yab
                    row[m + n + v][m + n + v] += yab
            mat = Matrix(row)
            constraints.append(mat)
            rhs.append(sdp.z.data[a][b])
            constraints.append(mat.scale(-1))
            rhs.append(-sdp.z.data[a][b])
    cw = [[Q0] * total for _ in range(total)]
    for v, coef in enumerate(sdp.c):
        cw[m + v][m + v] = coef
        cw[m + n + v][m + n + v] = -coef
    return ConicSDP(total, tuple(constraints), tuple(rhs), Matrix(cw))


# ---------------------------------------------------------------------------
# weak separation (conic form)
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SeparationResult:
    kind: str
    matrix: Optional[Matrix] = None

    @property
    def accepted(self) -> bool:
        return self.kind == ACCEPT


def weak_separation(sdp: ConicSDP, y: Matrix, delta) -> SeparationResult:
    """Accept y as delta-close to the feasible region or emit a separator.

    Separators have exact infinity norm 1 and satisfy
    <S, y> + delta > max{<S, X> | X feasible}.
    """
    delta = as_q(delta)
    if delta <= 0:
        raise ContractViolation("delta must be positive")
    if y.rows != sdp.dim or not y.is_symmetric():
        raise ContractViolation("query point must be a symmetric dim x dim matrix")

    violated = [a for a, b in zip(sdp.constraints, sdp.rhs) if a.inner(y) > b]
    if violated:
        agg = violated[0]
        for a in violated[1:]:
            agg = agg.add(a)
        scale = agg.inf_norm()
        if scale == 0:
            return SeparationResult(EMPTY_ROWS)
        return SeparationResult(SEPARATE, agg.scale(1 / scale))

    shifted = y.shifted(sdp.psd_shift)
    # internal tolerance: the ||v||^2 in [1/4,4] window and the final
    # infinity-norm rescale (factor <= dim) each cost a constant, so the
    # eigen route runs at delta/(2*dim) to keep the emitted cut valid.
    d_int = delta / (2 * sdp.dim)
    lam = approx_min_eigenvalue(shifted, d_int / 4)
    if lam < d_int / 2:
        v = approx_eigenvector(shifted, lam, d_int)
        s0 = outer(v, v).scale(-1 / norm_sq(v))
        return SeparationResult(SEPARATE, s0.scale(1 / s0.inf_norm()))
    return SeparationResult(ACCEPT)


# ---------------------------------------------------------------------------
# full-dimensionality preprocessing and rounding
# ---------------------------------------------------------------------------

def make_full_dimensional(sdp: ConicSDP, eps) -> ConicSDP:
    """Enlarge the region so it has interior, every point staying eps-close.

    The PSD cone is relaxed to X + eps/(sqrt(dim)*||C||) * I >= 0 and each row
    to b_i + eps/(||A_i||*||C||); rational ceil-sqrt upper bounds stand in for
    the irrational norms, which only shrinks the relaxation and keeps every
    stated bound valid. A zero-norm objective falls back to norm 1.
    """
    eps = as_q(eps)
    if eps <= 0:
        raise ContractViolation("eps must be positive")
    norm_c = q_sqrt_ceil(sdp.objective.norm_sq())
    if norm_c < 1:
        norm_c = Q1
    shift_add = eps / (q_sqrt_ceil(QQ(sdp.dim)) * norm_c)
    new_rhs = []
    for a, b in zip(sdp.constraints, sdp.rhs):
        norm_a = q_sqrt_ceil(a.norm_sq())
        if norm_a < 1:
            norm_a = Q1
        new_rhs.append(b + eps / (norm_a * norm_c))
    return ConicSDP(sdp.dim, sdp.constraints, tuple(new_rhs), sdp.objective,
                    sdp.psd_shift + shift_add)


def objective_norm_cap(c: Sequence) -> "QQ":
    """max(1, rational upper bound on ||c||), the rounding denominator."""
    cap = q_sqrt_ceil(norm_sq([as_q(v) for v in c]))
    return cap if cap > 1 else Q1


def default_rounding_tolerance(c: Sequence) -> "QQ":
    return 1 / (4 * objective_norm_cap(c))


def round_to_integer_optimum(s, c: Sequence) -> int:
    """Nearest integer to s; valid when s is a 1/(4*max{1,||c||})-accurate value.

    A value exactly halfway between integers contradicts the |s - s*| <= 1/4
    guarantee and is reported as a precondition violation.
    """
    s = as_q(s)
    shifted = s + QQ(1, 2)
    if shifted.denominator == 1:
        raise ContractViolation(f"value {s} is exactly half-integral; rounding precondition violated")
    return q_floor(shifted)
