"""End-to-end experiment harness: BLP, per-level SDP solves, capture search.

Level 0 is the LP relaxation itself and is solved exactly by the simplex;
levels t >= 1 are moment lifts solved by the ellipsoid at the rounding
tolerance (or a caller-supplied one). min_capture_level walks levels upward
until the rounded SDP optimum matches the brute-force integer optimum and
reports per-level outcomes, including size-guard refusals and budget
exhaustion, which are expected on instances beyond desk scale.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Tuple

from ._ratio import QQ, as_q, q_sqrt_ceil
from .ellipsoid import BUDGET_EXHAUSTED, EMPTY, SolveOptions, SolveResult, ellipsoid_optimize
from .encode import ZeroOneLP, blp_value, to_ilp
from .errors import ContractViolation
from .folding import folded_optimize
from .lasserre import DEFAULT_COORD_GUARD, coordinate_count, lift
from .sdp import default_rounding_tolerance, round_to_integer_optimum
from .vcsp import DEFAULT_BRUTE_CAP, VcspInstance, brute_force_opt

SOLVED = "solved"
SIZE_GUARDED = "size_guarded"
BUDGET = "budget_exhausted"
EMPTY_REGION = "empty"


@dataclass(frozen=True)
class RunConfig:
    """Reproducible knobs for one pipeline run."""

    t_max: int = 2
    delta: Optional["QQ"] = None          # None: rounding tolerance 1/(4*max(1,||c||))
    radius: Optional["QQ"] = None         # None: sqrt(#coordinates) + 1
    folding: bool = False
    brute_cap: int = DEFAULT_BRUTE_CAP
    coord_guard: int = 120                # ellipsoid-facing guard, not the lift guard
    budget: Optional[int] = None
    seed: int = 0

    def normalized_delta(self, objective) -> "QQ":
        if self.delta is not None:
            return as_q(self.delta)
        return default_rounding_tolerance(objective)


@dataclass(frozen=True)
class LevelOutcome:
    level: int
    status: str
    value: Optional["QQ"] = None
    rounded: Optional[int] = None
    iterations: int = 0
    detail: str = ""


@dataclass(frozen=True)
class CaptureReport:
    opt: int
    blp: "QQ"
    levels: Tuple[LevelOutcome, ...]
    capture_level: Optional[int]
    t_max: int

    @property
    def captured(self) -> bool:
        return self.capture_level is not None


def solve_lasserre_level(lp: ZeroOneLP, level: int, config: RunConfig) -> LevelOutcome:
    """Solve the level-t lift of a 0-1 LP and round its value."""
    coords = coordinate_count(lp.num_vars, level)
    if coords - 1 > config.coord_guard:
        return LevelOutcome(level, SIZE_GUARDED,
                            detail=f"{coords - 1} coordinates exceed guard {config.coord_guard}")
    pencil = lift(lp, level, coord_guard=max(DEFAULT_COORD_GUARD, coords))
    delta = config.normalized_delta(lp.c)
    radius = as_q(config.radius) if config.radius is not None else q_sqrt_ceil(QQ(pencil.num_coords)) + 1
    options = SolveOptions(budget=config.budget)
    solver = folded_optimize if config.folding else ellipsoid_optimize
    result: SolveResult = solver(pencil.pencil, delta, radius, options)
    if result.status == EMPTY:
        return LevelOutcome(level, EMPTY_REGION, iterations=result.iterations)
    if result.status == BUDGET_EXHAUSTED:
        return LevelOutcome(level, BUDGET, value=result.value, iterations=result.iterations,
                            detail="iteration budget exhausted")
    try:
        rounded: Optional[int] = round_to_integer_optimum(result.value, lp.c)
    except ContractViolation:
        rounded = None  # half-integral value: this level does not capture
    return LevelOutcome(level, SOLVED, value=result.value, rounded=rounded,
                        iterations=result.iterations)


def min_capture_level(instance: VcspInstance, t_max: int, config: Optional[RunConfig] = None) -> CaptureReport:
    """Smallest level whose rounded optimum equals the integer optimum.

    Level 0 means the basic LP relaxation is already exact. Levels that the
    size guard or the iteration budget refuses are reported as such; the
    capture level is None when no computed level matches within t_max.
    """
    config = config or RunConfig()
    opt, _ = brute_force_opt(instance, cap=config.brute_cap)
    blp = blp_value(instance)
    levels = []
    capture: Optional[int] = None

    if blp == opt:
        capture = 0
        levels.append(LevelOutcome(0, SOLVED, value=blp, rounded=int(opt)))
    else:
        levels.append(LevelOutcome(0, SOLVED, value=blp, rounded=None,
                                   detail="relaxation exceeds the integer optimum"))
        lp = to_ilp(instance)
        for t in range(1, t_max + 1):
            outcome = solve_lasserre_level(lp, t, config)
            levels.append(outcome)
            if outcome.status == SOLVED and outcome.rounded == opt:
                capture = t
                break
            if outcome.status == SIZE_GUARDED:
                # larger levels only grow; report them as guarded without solving
                for t2 in range(t + 1, t_max + 1):
                    levels.append(LevelOutcome(t2, SIZE_GUARDED, detail="implied by smaller level"))
                break
    return CaptureReport(int(opt), blp, tuple(levels), capture, t_max)
