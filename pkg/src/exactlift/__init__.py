"""Exact solver for finite-valued CSPs via moment-matrix SDP lifts.

Pipeline: VCSP -> 0-1 LP -> level-t moment SDP -> ellipsoid weak
optimization -> exact rounding, everything over arbitrary-precision
rationals so every certificate is exact.
"""
from ._ratio import QQ, as_q, q_str
from .linalg import Matrix, Polynomial, char_poly, is_positive_definite, psd_certificate
from .eigen import approx_eigenvector, approx_min_eigenvalue
from .simplex import LpResult, lp_optimize
from .vcsp import (Assignment, Constraint, Domain, ValuedFunction, VcspInstance,
                   brute_force_opt, evaluate)
from .encode import (MaxCspInstance, Relation, ZeroOneLP, blp_value, maxcsp_to_vcsp,
                     maxcut_to_vcsp, to_ilp)
from .lasserre import (MomentVector, SdpPencil, SubsetIndex, lift, moment_matrix,
                       project, rank_one_lift, slack_matrix, subset_index)
from .sdp import (ConicSDP, InequalitySDP, conic_to_inequality, inequality_to_conic,
                  make_full_dimensional, round_to_integer_optimum, weak_separation)
from .ellipsoid import SolveOptions, SolveResult, ellipsoid_optimize
from .folding import (IndexMap, almost_fold, fold_matrix, fold_psd_check, fold_vector,
                      folded_optimize, unfold)
from .reductions import (CnfFormula, LinSystem, WeightedGraph, brute_lin, brute_sat,
                         max_cut_bitmask, threelin_to_threesat, threesat_to_maxcut)
from .pipeline import CaptureReport, LevelOutcome, RunConfig, min_capture_level
from .errors import CapExceeded, ContractViolation, ParseError, SolverDegeneracy

__version__ = "0.1.0"
