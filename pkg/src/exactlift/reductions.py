"""Satisfiability-preserving reduction chain: 3LIN -> 3SAT -> MAXCUT.

Each mod-2 equation over three distinct variables becomes the four clauses
on those variables with matching negation parity, so the clause set excludes
exactly the assignments violating the equation. The 3SAT formula is then
turned into a weighted max-cut question through a not-all-equal chain:
clause (l1 v l2 v l3) plus a global marker variable w is equivalent to
NAE(l1, l2, l3, w), which splits into NAE(l1, l2, u) and NAE(~u, l3, w) with
a fresh u per clause. Every variable contributes a heavy edge between its
two literal vertices and every NAE triple a unit triangle, so the formula is
satisfiable exactly when the max cut reaches the stated threshold.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Dict, Tuple

from .errors import CapExceeded, ContractViolation

BRUTE_VAR_CAP = 24
MAXCUT_BRUTE_VERTEX_CAP = 22

Literal = Tuple[str, bool]  # (variable, negated)


@dataclass(frozen=True)
class LinSystem:
    """Mod-2 equations a+b+c = 0 (eqs0) and a+b+c = 1 (eqs1)."""

    variables: Tuple[str, ...]
    eqs0: Tuple[Tuple[str, str, str], ...]
    eqs1: Tuple[Tuple[str, str, str], ...]

    def __post_init__(self):
        vset = set(self.variables)
        for eq in self.eqs0 + self.eqs1:
            if any(v not in vset for v in eq):
                raise ContractViolation(f"equation {eq} uses a variable outside the system")


@dataclass(frozen=True)
class CnfFormula:
    """3-CNF with exactly three literals per clause, no repeated variable in a clause."""

    variables: Tuple[str, ...]
    clauses: Tuple[Tuple[Literal, Literal, Literal], ...]

    def __post_init__(self):
        vset = set(self.variables)
        for k, clause in enumerate(self.clauses):
            if len(clause) != 3:
                raise ContractViolation(f"clause {k} does not have exactly 3 literals")
            names = [v for v, _ in clause]
            if len(set(names)) != 3:
                raise ContractViolation(f"clause {k} repeats a variable")
            if any(v not in vset for v in names):
                raise ContractViolation(f"clause {k} uses an unknown variable")


@dataclass(frozen=True)
class WeightedGraph:
    """Undirected graph, nonnegative integer weights, no self-loops."""

    vertices: Tuple[str, ...]
    edges: Tuple[Tuple[str, str, int], ...]

    def __post_init__(self):
        vset = set(self.vertices)
        if len(vset) != len(self.vertices):
            raise ContractViolation("duplicate vertex names")
        for u, v, w in self.edges:
            if u == v:
                raise ContractViolation(f"self-loop at {u}")
            if u not in vset or v not in vset:
                raise ContractViolation(f"edge ({u},{v}) references a missing vertex")
            if not isinstance(w, int) or w < 0:
                raise ContractViolation(f"edge ({u},{v}) weight must be a nonnegative integer")


def graph_from_edges(edge_list, extra_vertices=()) -> WeightedGraph:
    """Normalize an edge list: order endpoints, merge parallel edges."""
    merged: Dict[Tuple[str, str], int] = {}
    vertices = list(dict.fromkeys(extra_vertices))
    seen = set(vertices)
    for u, v, w in edge_list:
        for x in (u, v):
            if x not in seen:
                seen.add(x)
                vertices.append(x)
        key = (u, v) if u <= v else (v, u)
        merged[key] = merged.get(key, 0) + w
    edges = tuple((u, v, w) for (u, v), w in sorted(merged.items()))
    return WeightedGraph(tuple(vertices), edges)


def threelin_to_threesat(system: LinSystem) -> CnfFormula:
    """Four parity-matched clauses per equation; satisfiability preserved exactly.

    A clause with negation pattern p is falsified exactly by the assignment
    p, so the equation a+b+c = r (mod 2) becomes the four clauses whose
    patterns have parity 1-r: they exclude precisely the assignments of the
    wrong parity. (Even-negation clauses therefore encode r = 1 and
    odd-negation clauses r = 0.)
    """
    for eq in system.eqs0 + system.eqs1:
        if len(set(eq)) != 3:
            raise ContractViolation(f"degenerate triple {eq}: variables must be pairwise distinct")
    clauses = []
    even_patterns = [(False, False, False), (True, True, False), (False, True, True), (True, False, True)]
    odd_patterns = [(True, True, True), (True, False, False), (False, True, False), (False, False, True)]
    for a, b, c in system.eqs0:
        for pat in odd_patterns:
            clauses.append(((a, pat[0]), (b, pat[1]), (c, pat[2])))
    for a, b, c in system.eqs1:
        for pat in even_patterns:
            clauses.append(((a, pat[0]), (b, pat[1]), (c, pat[2])))
    return CnfFormula(system.variables, tuple(clauses))


def _pos(v: str) -> str:
    return f"x:{v}"


def _neg(v: str) -> str:
    return f"nx:{v}"


def _lit_vertex(lit: Literal) -> str:
    v, negated = lit
    return _neg(v) if negated else _pos(v)


def _fresh(base: str, taken: set) -> str:
    name = base
    while name in taken:
        name = "_" + name
    taken.add(name)
    return name


def _gadget_parts(formula: CnfFormula):
    """Shared gadget structure: (pair variables, K, NAE triangles as literals)."""
    m = len(formula.clauses)
    taken = set(formula.variables)
    splitters = [_fresh(f"u{j}", taken) for j in range(m)]
    marker = _fresh("w", taken)
    pair_vars = list(formula.variables) + splitters + [marker]
    k_weight = 6 * m + 1
    triangles = []
    for j, (l1, l2, l3) in enumerate(formula.clauses):
        triangles.append((l1, l2, (splitters[j], False)))
        triangles.append(((splitters[j], True), l3, (marker, False)))
    return pair_vars, k_weight, triangles


def threesat_to_maxcut(formula: CnfFormula):
    """(graph, threshold) with: formula satisfiable <=> max-cut(graph) >= threshold.

    Vertices: one pair per formula variable, one pair per clause (the NAE
    splitter) and one global marker pair. Pair edges weigh K = 6m + 1,
    which exceeds the total triangle weight, so optimal cuts always
    separate every pair and encode a truth assignment.
    """
    if not formula.clauses and not formula.variables:
        return WeightedGraph((), ()), 0
    pair_vars, k_weight, triangles = _gadget_parts(formula)
    edges = []
    vertices = []
    for v in pair_vars:
        vertices.extend([_pos(v), _neg(v)])
        edges.append((_pos(v), _neg(v), k_weight))
    for a, b, c in triangles:
        va, vb, vc = _lit_vertex(a), _lit_vertex(b), _lit_vertex(c)
        edges.extend([(va, vb, 1), (vb, vc, 1), (va, vc, 1)])
    graph = graph_from_edges(edges, extra_vertices=vertices)
    threshold = k_weight * len(pair_vars) + 4 * len(formula.clauses)
    return graph, threshold


def brute_lin(system: LinSystem) -> bool:
    if len(system.variables) > BRUTE_VAR_CAP:
        raise CapExceeded(f"3LIN system beyond {BRUTE_VAR_CAP} variables")
    for bits in itertools.product((0, 1), repeat=len(system.variables)):
        h = dict(zip(system.variables, bits))
        if all((h[a] ^ h[b] ^ h[c]) == 0 for a, b, c in system.eqs0) and \
           all((h[a] ^ h[b] ^ h[c]) == 1 for a, b, c in system.eqs1):
            return True
    return False


def brute_sat(formula: CnfFormula) -> bool:
    if len(formula.variables) > BRUTE_VAR_CAP:
        raise CapExceeded(f"formula beyond {BRUTE_VAR_CAP} variables")
    for bits in itertools.product((False, True), repeat=len(formula.variables)):
        h = dict(zip(formula.variables, bits))
        if all(any(h[v] != neg for v, neg in clause) for clause in formula.clauses):
            return True
    return False


def max_cut_bitmask(graph: WeightedGraph) -> int:
    """Independent exact max-cut oracle: enumerate vertex subsets outright."""
    n = len(graph.vertices)
    if n > MAXCUT_BRUTE_VERTEX_CAP:
        raise CapExceeded(f"graph beyond {MAXCUT_BRUTE_VERTEX_CAP} vertices")
    index = {v: i for i, v in enumerate(graph.vertices)}
    arcs = [(index[u], index[v], w) for u, v, w in graph.edges]
    best = 0
    for mask in range(1 << max(0, n - 1)):  # vertex n-1 fixed on one side
        total = 0
        for i, j, w in arcs:
            if ((mask >> i) & 1) != ((mask >> j) & 1):
                total += w
        if total > best:
            best = total
    return best


def gadget_max_cut(formula: CnfFormula) -> int:
    """Exact max cut of threesat_to_maxcut(formula)'s graph, by structure.

    Any cut leaving some heavy pair uncut forfeits K, which exceeds the
    total triangle weight 6m, so the optimum is K * #pairs plus the best
    triangle score over the 2^#pairs pair-respecting polarities.
    """
    if not formula.clauses and not formula.variables:
        return 0
    pair_vars, k_weight, triangles = _gadget_parts(formula)
    best = 0
    top = 4 * len(formula.clauses)  # 2 per triangle, 2 triangles per clause
    for bits in itertools.product((False, True), repeat=len(pair_vars)):
        h = dict(zip(pair_vars, bits))

        def side(lit: Literal) -> bool:
            v, negated = lit
            return h[v] != negated

        score = 0
        for a, b, c in triangles:
            sides = (side(a), side(b), side(c))
            if sides[0] != sides[1] or sides[1] != sides[2]:
                score += 2
        if score > best:
            best = score
            if best == top:
                break
    return k_weight * len(pair_vars) + best
