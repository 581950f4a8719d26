"""Fixed instance corpus shared by unit and acceptance tests.

Every instance stays within 12 ILP variables so the whole corpus is within
the rank-one feasibility budget; the small members (<= 4 ILP variables) are
also ellipsoid-solvable at levels 1 and 2 within seconds.
"""
from __future__ import annotations

from exactlift import (Constraint, Domain, MaxCspInstance, Relation, ValuedFunction,
                       VcspInstance, maxcsp_to_vcsp, maxcut_to_vcsp)
from exactlift.reductions import graph_from_edges

D2 = Domain(("0", "1"))


def cut_graph(edge_list, vertices=()):
    return graph_from_edges(edge_list, extra_vertices=vertices)


def inst_empty_one_var() -> VcspInstance:
    """No constraints, one variable: 2 ILP variables, objective zero."""
    return VcspInstance(D2, ("v",), ())


def inst_single_unary() -> VcspInstance:
    """One unary payoff (1, 3): 4 ILP variables, BLP-exact."""
    f = ValuedFunction("payoff13", 1, {("0",): 1, ("1",): 3})
    return VcspInstance(D2, ("v",), (Constraint(("v",), f, 1),))


def inst_single_unary_b() -> VcspInstance:
    """One unary payoff (2, 1): 4 ILP variables, BLP-exact."""
    f = ValuedFunction("payoff21", 1, {("0",): 2, ("1",): 1})
    return VcspInstance(D2, ("v",), (Constraint(("v",), f, 1),))


def inst_conflicting_unaries() -> VcspInstance:
    """Two unaries pulling one variable both ways: 6 ILP variables."""
    f = ValuedFunction("payoff13", 1, {("0",): 1, ("1",): 3})
    g = ValuedFunction("payoff20", 1, {("0",): 2, ("1",): 0})
    return VcspInstance(D2, ("v",), (Constraint(("v",), f, 1), Constraint(("v",), g, 1)))


def inst_unary_d3() -> VcspInstance:
    """Unary over a three-label domain: 6 ILP variables."""
    d3 = Domain(("0", "1", "2"))
    f = ValuedFunction("ramp", 1, {("0",): 0, ("1",): 1, ("2",): 2})
    return VcspInstance(d3, ("v",), (Constraint(("v",), f, 1),))


def inst_single_edge() -> VcspInstance:
    """One cut edge of weight 1: 8 ILP variables, BLP-exact."""
    return maxcut_to_vcsp(cut_graph([("u", "v", 1)]))


def inst_neq_maxcsp() -> VcspInstance:
    """MAXCSP with one binary disequality: 8 ILP variables."""
    neq = Relation("neq", 2, frozenset({("0", "1"), ("1", "0")}))
    return maxcsp_to_vcsp(MaxCspInstance(D2, ("u", "v"), ((("u", "v"), neq),)))


def inst_cut_eq_gap() -> VcspInstance:
    """Cut and equality payoff on the same pair: 12 ILP variables.

    Every assignment satisfies exactly one of the two constraints, so the
    integer optimum is 1, while independent half/half tuple weights satisfy
    both fractionally and push the basic LP relaxation to 2.
    """
    cut = ValuedFunction("cut", 2, {("0", "0"): 0, ("0", "1"): 1, ("1", "0"): 1, ("1", "1"): 0})
    eq = ValuedFunction("same", 2, {("0", "0"): 1, ("0", "1"): 0, ("1", "0"): 0, ("1", "1"): 1})
    return VcspInstance(D2, ("u", "v"),
                        (Constraint(("u", "v"), cut, 1), Constraint(("u", "v"), eq, 1)))


def triangle_graph():
    return cut_graph([("a", "b", 1), ("b", "c", 1), ("a", "c", 1)])


def inst_triangle() -> VcspInstance:
    """Triangle max-cut: 18 ILP variables, the BLP gap witness (2 vs 3)."""
    return maxcut_to_vcsp(triangle_graph())


def inst_four_cycle() -> VcspInstance:
    return maxcut_to_vcsp(cut_graph(
        [("v0", "v1", 1), ("v1", "v2", 1), ("v2", "v3", 1), ("v0", "v3", 1)]))


# corpus rows: (name, instance builder, integer optimum by hand)
RANK_ONE_CORPUS = (
    ("empty_one_var", inst_empty_one_var),
    ("single_unary", inst_single_unary),
    ("single_unary_b", inst_single_unary_b),
    ("conflicting_unaries", inst_conflicting_unaries),
    ("unary_d3", inst_unary_d3),
    ("single_edge", inst_single_edge),
    ("neq_maxcsp", inst_neq_maxcsp),
    ("cut_eq_gap", inst_cut_eq_gap),
)

# subset with small enough lifts for ellipsoid level runs (criterion 9)
MONOTONE_CORPUS = (
    ("empty_one_var", inst_empty_one_var),
    ("single_unary", inst_single_unary),
    ("single_unary_b", inst_single_unary_b),
)
