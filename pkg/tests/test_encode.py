"""0-1 program construction, BLP relaxation, MAXCUT/MAXCSP encodings."""
import itertools

from exactlift import (Domain, MaxCspInstance, Relation, blp_value, brute_force_opt,
                       evaluate, maxcsp_to_vcsp, maxcut_to_vcsp, to_ilp)
from exactlift._ratio import QQ
from exactlift.encode import induced_point
from exactlift.vcsp import Constraint, VcspInstance

from corpus import RANK_ONE_CORPUS, cut_graph, inst_single_unary, inst_triangle


def test_triangle_variable_count():
    lp = to_ilp(inst_triangle())
    # 3 constraints x 2^2 tuple vars + 3 vertices x 2 marginals
    assert lp.num_vars == 18
    assert sum(1 for n in lp.names if n.startswith("mu:")) == 6
    assert sum(1 for n in lp.names if n.startswith("lam:")) == 12


def test_no_constraint_instance_shape():
    d = Domain(("0", "1"))
    inst = VcspInstance(d, ("v",), ())
    lp = to_ilp(inst)
    assert lp.names == ("mu:v:0", "mu:v:1")
    assert all(c == 0 for c in lp.c)
    # one normalization equality pair plus four box rows
    assert lp.a.rows == 6


def test_unary_objective_transcription():
    inst = inst_single_unary()  # payoffs f(0)=1, f(1)=3, weight 1
    lp = to_ilp(inst)
    coef = dict(zip(lp.names, lp.c))
    assert coef["lam:0:0"] == 1
    assert coef["lam:0:1"] == 3
    assert coef["mu:v:0"] == 0 and coef["mu:v:1"] == 0


def test_box_rows_present_for_every_variable():
    lp = to_ilp(inst_triangle())
    rows = {tuple(row) + (rhs,) for row, rhs in zip(lp.a.data, lp.b)}
    for j in range(lp.num_vars):
        lower = tuple(QQ(1) if i == j else QQ(0) for i in range(lp.num_vars)) + (QQ(0),)
        upper = tuple(QQ(-1) if i == j else QQ(0) for i in range(lp.num_vars)) + (QQ(-1),)
        assert lower in rows and upper in rows


def test_induced_points_feasible_with_matching_objective():
    for name, builder in RANK_ONE_CORPUS:
        inst = builder()
        lp = to_ilp(inst)
        for combo in itertools.product(inst.domain.labels, repeat=len(inst.variables)):
            h = dict(zip(inst.variables, combo))
            point = induced_point(inst, h, lp)
            assert lp.feasible(point), name
            value = sum(c * x for c, x in zip(lp.c, point))
            assert value == evaluate(inst, h), name


def test_blp_dominates_integer_optimum_on_corpus():
    for name, builder in RANK_ONE_CORPUS:
        inst = builder()
        assert blp_value(inst) >= brute_force_opt(inst)[0], name


def test_blp_triangle_equals_three():
    assert blp_value(inst_triangle()) == 3


def test_blp_single_edge_equals_optimum():
    inst = maxcut_to_vcsp(cut_graph([("u", "v", 1)]))
    assert blp_value(inst) == 1
    assert brute_force_opt(inst)[0] == 1


def test_blp_empty_instance_zero():
    d = Domain(("0", "1"))
    assert blp_value(VcspInstance(d, ("v",), ())) == 0


def test_blp_scales_with_weights():
    inst = inst_triangle()
    tripled = VcspInstance(
        inst.domain, inst.variables,
        tuple(Constraint(c.scope, c.fn, 3 * c.weight) for c in inst.constraints))
    assert blp_value(tripled) == 3 * blp_value(inst)
    assert brute_force_opt(tripled)[0] == 3 * brute_force_opt(inst)[0]


def test_maxcut_single_edge_weight_five():
    inst = maxcut_to_vcsp(cut_graph([("u", "v", 5)]))
    assert brute_force_opt(inst)[0] == 5


def test_maxcut_triangle():
    assert brute_force_opt(maxcut_to_vcsp(cut_graph(
        [("a", "b", 1), ("b", "c", 1), ("a", "c", 1)])))[0] == 2


def test_maxcut_edgeless():
    graph = cut_graph([], vertices=("a", "b"))
    assert brute_force_opt(maxcut_to_vcsp(graph))[0] == 0


def test_maxcsp_full_relation_always_satisfied():
    d = Domain(("0", "1"))
    full = Relation("full", 2, frozenset(itertools.product(d.labels, repeat=2)))
    inst = maxcsp_to_vcsp(MaxCspInstance(d, ("u", "v"), ((("u", "v"), full),)))
    assert brute_force_opt(inst)[0] == 1


def test_maxcsp_three_colouring_triangle():
    d3 = Domain(("0", "1", "2"))
    neq = Relation("neq", 2, frozenset(
        (a, b) for a in d3.labels for b in d3.labels if a != b))
    inst = maxcsp_to_vcsp(MaxCspInstance(
        d3, ("a", "b", "c"),
        ((("a", "b"), neq), (("b", "c"), neq), (("a", "c"), neq))))
    assert brute_force_opt(inst)[0] == 3


def test_maxcsp_contradictory_unaries():
    d = Domain(("0", "1"))
    only0 = Relation("only0", 1, frozenset({("0",)}))
    only1 = Relation("only1", 1, frozenset({("1",)}))
    inst = maxcsp_to_vcsp(MaxCspInstance(d, ("v",), ((("v",), only0), (("v",), only1))))
    assert brute_force_opt(inst)[0] == 1
