"""0-1 integer program of a VCSP instance and its basic LP relaxation.

The program has one tuple variable per (constraint, domain tuple) and one
marginal variable per (instance variable, label). Consistency and
normalization equalities are stored as inequality pairs and every variable
carries explicit 0/1 box rows, so downstream consumers see the single
polytope form Ax >= b.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Dict, FrozenSet, Mapping, Tuple

from ._ratio import QQ, Q0, Q1, as_q
from .errors import ContractViolation
from .linalg import Matrix
from .reductions import WeightedGraph
from .simplex import lp_optimize
from .vcsp import Constraint, Domain, ValuedFunction, VcspInstance


@dataclass(frozen=True)
class ZeroOneLP:
    """max <c,x> over {x in {0,1}^n | Ax >= b}; relaxation drops integrality."""

    names: Tuple[str, ...]
    a: Matrix
    b: Tuple["QQ", ...]
    c: Tuple["QQ", ...]

    @property
    def num_vars(self) -> int:
        return len(self.names)

    def index_of(self, name: str) -> int:
        return self.names.index(name)

    def feasible(self, x) -> bool:
        """Exact membership test for {x | Ax >= b}."""
        return all(v >= rhs for v, rhs in zip(self.a.matvec(list(x)), self.b))


def mu_name(variable: str, label: str) -> str:
    return f"mu:{variable}:{label}"


def lam_name(constraint_index: int, labels: Tuple[str, ...]) -> str:
    return f"lam:{constraint_index}:{','.join(labels)}"


def box_rows(n: int):
    """Rows x_v >= 0 and -x_v >= -1 for every variable, in variable order."""
    rows, rhs = [], []
    for v in range(n):
        lower = [Q0] * n
        lower[v] = Q1
        rows.append(lower)
        rhs.append(Q0)
        upper = [Q0] * n
        upper[v] = QQ(-1)
        rows.append(upper)
        rhs.append(QQ(-1))
    return rows, rhs


def to_ilp(instance: VcspInstance) -> ZeroOneLP:
    """The 0-1 program of a VCSP instance, equalities emitted as row pairs."""
    domain = instance.domain
    names = []
    for v in instance.variables:
        for a in domain.labels:
            names.append(mu_name(v, a))
    tuple_vars: Dict[int, Dict[Tuple[str, ...], int]] = {}
    for k, con in enumerate(instance.constraints):
        tuple_vars[k] = {}
        for labels in itertools.product(domain.labels, repeat=con.fn.arity):
            tuple_vars[k][labels] = len(names)
            names.append(lam_name(k, labels))
    index = {nm: i for i, nm in enumerate(names)}
    n = len(names)

    rows, rhs = [], []

    def equality(coeffs: Dict[int, "QQ"], value) -> None:
        row = [Q0] * n
        for j, coef in coeffs.items():
            row[j] += coef
        rows.append(row)
        rhs.append(as_q(value))
        rows.append([-v for v in row])
        rhs.append(-as_q(value))

    # marginal consistency: sum of tuple vars agreeing at a position equals
    # the marginal of that scope variable
    for k, con in enumerate(instance.constraints):
        for pos in range(con.fn.arity):
            for a in domain.labels:
                coeffs: Dict[int, "QQ"] = {}
                for labels, j in tuple_vars[k].items():
                    if labels[pos] == a:
                        coeffs[j] = coeffs.get(j, Q0) + 1
                coeffs[index[mu_name(con.scope[pos], a)]] = coeffs.get(
                    index[mu_name(con.scope[pos], a)], Q0) - 1
                equality(coeffs, 0)
    # normalization: each variable takes exactly one label
    for v in instance.variables:
        equality({index[mu_name(v, a)]: Q1 for a in domain.labels}, 1)

    brows, brhs = box_rows(n)
    rows.extend(brows)
    rhs.extend(brhs)

    c = [Q0] * n
    for k, con in enumerate(instance.constraints):
        for labels, j in tuple_vars[k].items():
            c[j] += con.weight * con.fn(labels)

    return ZeroOneLP(tuple(names), Matrix(rows), tuple(rhs), tuple(c))


def blp_value(instance: VcspInstance) -> "QQ":
    """Optimum of the basic LP relaxation; always >= the integer optimum."""
    lp = to_ilp(instance)
    res = lp_optimize(lp.a, list(lp.b), list(lp.c))
    if res.status != "optimal":  # pragma: no cover - BLP is always feasible and bounded
        raise ContractViolation(f"BLP solve reported {res.status}")
    return res.value


def induced_point(instance: VcspInstance, assignment: Mapping[str, str], lp: ZeroOneLP):
    """The 0-1 point of the program induced by a total assignment."""
    point = []
    for name in lp.names:
        kind, first, second = name.split(":", 2)
        if kind == "mu":
            point.append(Q1 if assignment[first] == second else Q0)
        else:
            k = int(first)
            scope = instance.constraints[k].scope
            labels = tuple(second.split(","))
            hit = all(assignment[v] == a for v, a in zip(scope, labels))
            point.append(Q1 if hit else Q0)
    return point


def cut_function() -> ValuedFunction:
    table = {("0", "0"): 0, ("0", "1"): 1, ("1", "0"): 1, ("1", "1"): 0}
    return ValuedFunction("cut", 2, table)


def maxcut_to_vcsp(graph: WeightedGraph) -> VcspInstance:
    """One cut-indicator constraint per edge; Opt equals the max-cut value."""
    domain = Domain(("0", "1"))
    fn = cut_function()
    constraints = tuple(Constraint((u, v), fn, w) for u, v, w in graph.edges)
    return VcspInstance(domain, graph.vertices, constraints)


@dataclass(frozen=True)
class Relation:
    name: str
    arity: int
    tuples: FrozenSet[Tuple[str, ...]]


@dataclass(frozen=True)
class MaxCspInstance:
    domain: Domain
    variables: Tuple[str, ...]
    constraints: Tuple[Tuple[Tuple[str, ...], Relation], ...]  # (scope, relation)


def maxcsp_to_vcsp(instance: MaxCspInstance) -> VcspInstance:
    """Relations become 0/1 indicator payoffs with unit weights."""
    fns: Dict[str, ValuedFunction] = {}
    for _, rel in instance.constraints:
        if rel.name not in fns:
            table = {
                labels: (1 if labels in rel.tuples else 0)
                for labels in itertools.product(instance.domain.labels, repeat=rel.arity)
            }
            fns[rel.name] = ValuedFunction(f"ind:{rel.name}", rel.arity, table)
    constraints = tuple(
        Constraint(scope, fns[rel.name], 1) for scope, rel in instance.constraints
    )
    return VcspInstance(instance.domain, instance.variables, constraints)
