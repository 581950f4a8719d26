"""Folding operators and the partition-refining folded solver."""
import random

import pytest

from exactlift import (IndexMap, InequalitySDP, Matrix, almost_fold, ellipsoid_optimize,
                       fold_matrix, fold_psd_check, fold_vector, folded_optimize,
                       psd_certificate, unfold)
from exactlift._ratio import QQ, dot, norm_sq
from exactlift.errors import ContractViolation


def test_fold_examples_single_class():
    sigma = IndexMap.from_assignment([0, 0])
    assert almost_fold([2, 4], sigma) == [6]
    assert fold_vector([2, 4], sigma) == [3]
    assert unfold([3], sigma) == [3, 3]


def test_injective_fold_is_permutation():
    sigma = IndexMap.identity(3)
    x = [QQ(5), QQ(-1), QQ(2, 3)]
    assert fold_vector(x, sigma) == x
    assert unfold(fold_vector(x, sigma), sigma) == x


def test_inner_product_identities():
    # c agreeing with sigma: <c, unfold(fold(x))> = <c, x> = <almost_fold(c), fold(x)>
    sigma = IndexMap.from_assignment([0, 0, 1])
    c = [QQ(1), QQ(1), QQ(7)]
    x = [QQ(2), QQ(4), QQ(-3)]
    folded = fold_vector(x, sigma)
    assert dot(c, unfold(folded, sigma)) == dot(c, x) == dot(almost_fold(c, sigma), folded)


def test_inner_product_identity_on_spec_pair():
    sigma = IndexMap.from_assignment([0, 0])
    assert dot([1, 1], unfold(fold_vector([2, 4], sigma), sigma)) == 6


@pytest.mark.parametrize("seed", range(25))
def test_norm_contraction_random(seed):
    rng = random.Random(seed)
    n = rng.randint(1, 8)
    sigma = IndexMap.from_assignment(
        _normalize_assignment([rng.randint(0, max(0, n - 1)) for _ in range(n)]))
    d = [QQ(rng.randint(-9, 9), rng.randint(1, 4)) for _ in range(n)]
    assert norm_sq(fold_vector(d, sigma)) <= norm_sq(d)


def _normalize_assignment(raw):
    order = {}
    out = []
    for v in raw:
        if v not in order:
            order[v] = len(order)
        out.append(order[v])
    return out


def test_fold_matrix_identity_merge():
    tau = IndexMap.from_assignment([0, 0])
    folded = fold_matrix(Matrix.identity(2), tau)
    assert folded == Matrix([[QQ(1, 2)]])
    assert psd_certificate(folded).is_psd


def test_fold_matrix_all_ones():
    tau = IndexMap.from_assignment([0, 0, 1])
    ones = Matrix([[1] * 3 for _ in range(3)])
    folded = fold_psd_check(ones, tau)
    assert all(v == 1 for row in folded.data for v in row)


@pytest.mark.parametrize("seed", range(25))
def test_fold_psd_random_gram(seed):
    rng = random.Random(100 + seed)
    n = rng.randint(2, 5)
    g = Matrix([[QQ(rng.randint(-3, 3)) for _ in range(n)] for _ in range(n)])
    x = g.matmul(g.transpose())
    tau = IndexMap.from_assignment(
        _normalize_assignment([rng.randint(0, n - 1) for _ in range(n)]))
    folded = fold_psd_check(x, tau)
    assert psd_certificate(folded).is_psd


def test_fold_psd_check_rejects_non_psd():
    tau = IndexMap.from_assignment([0, 1])
    with pytest.raises(ContractViolation):
        fold_psd_check(Matrix([[0, 1], [1, 0]]), tau)


def test_index_map_validation_and_refinement():
    with pytest.raises(ContractViolation):
        IndexMap((0, 2), 2)  # not surjective onto 0..1
    sigma = IndexMap.from_assignment([0, 0, 0, 1])
    refined = sigma.refine_by([QQ(1), QQ(2), QQ(1), QQ(5)])
    assert refined.k == 3
    assert refined.assignment[0] == refined.assignment[2]
    assert refined.assignment[0] != refined.assignment[1]
    assert sigma.agrees([1, 1, 1, 9])
    assert not sigma.agrees([1, 2, 1, 9])


def _symmetric_sdp():
    """max x1 + x2 with 0 <= x1 + x2 <= 2: coordinates fully interchangeable.

    Both blocks depend on the coordinates only through their sum, so every
    separator gradient agrees with the one-class partition.
    """
    z = Matrix([[0, 0], [0, 2]])
    ysum = Matrix([[1, 0], [0, -1]])
    return InequalitySDP(("x1", "x2"), z, (ysum, ysum), (QQ(1), QQ(1)), (1, 1))


def test_folded_symmetric_region_keeps_one_class():
    sdp = _symmetric_sdp()
    folded = folded_optimize(sdp, QQ(1, 16), QQ(3))
    direct = ellipsoid_optimize(sdp, QQ(1, 16), QQ(3))
    assert folded.status == "optimal" and direct.status == "optimal"
    assert folded.refinements == 0
    assert abs(folded.value - 2) <= QQ(1, 16)
    assert abs(folded.value - direct.value) <= QQ(1, 8)


def _asymmetric_sdp():
    """max x1 + x2 with x1 <= 0 and x2 <= 1: only separators split the classes."""
    z = Matrix([[0, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]])
    y1 = Matrix([[-1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 0], [0, 0, 0, 0]])
    y2 = Matrix([[0, 0, 0, 0], [0, 0, 0, 0], [0, 0, -1, 0], [0, 0, 0, 1]])
    # blocks: [-x1], [1 + x1] (x1 in [-1, 0]); [1 - x2], [1 + x2] (x2 in [-1, 1])
    return InequalitySDP(("x1", "x2"), z, (y1, y2), (QQ(1), QQ(1)), (1, 1, 1, 1))


def test_folded_refinement_is_forced():
    sdp = _asymmetric_sdp()
    res = folded_optimize(sdp, QQ(1, 16), QQ(3))
    assert res.status == "optimal"
    assert res.refinements >= 1
    assert abs(res.value - 1) <= QQ(1, 8)  # optimum x1 = 0, x2 = 1


def test_folded_injective_matches_plain_solver():
    sdp = _asymmetric_sdp()
    distinct_c = InequalitySDP(sdp.coord_names, sdp.z, sdp.coeffs, (QQ(1), QQ(2)),
                               sdp.block_dims)
    folded = folded_optimize(distinct_c, QQ(1, 16), QQ(3))
    direct = ellipsoid_optimize(distinct_c, QQ(1, 16), QQ(3))
    # distinct objective values make the initial partition injective
    assert folded.refinements == 0
    assert folded.status == direct.status == "optimal"
    assert folded.value == direct.value and folded.point == direct.point


def test_unfold_shape_guard():
    with pytest.raises(ContractViolation):
        unfold([1, 2], IndexMap.from_assignment([0, 0]))
