"""Line-oriented text formats for every pipeline artifact.

All numbers are exact rationals printed as p/q (or a bare integer), so a
round trip through any format is lossless and byte-deterministic. Parsers
report the file and line of the first offending token.
"""
from __future__ import annotations

from typing import Dict, List, Optional, Tuple

from ._ratio import Q0, as_q, q_str
from .encode import ZeroOneLP
from .errors import ParseError
from .linalg import Matrix
from .reductions import CnfFormula, LinSystem, WeightedGraph, graph_from_edges
from .sdp import BlockPencil, PencilBlock
from .vcsp import Constraint, Domain, ValuedFunction, VcspInstance


def _lines(path: str):
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            yield lineno, line.split()


def _fail(path: str, lineno: int, message: str):
    raise ParseError(f"{path}:{lineno}: {message}")


def _parse_q(path: str, lineno: int, token: str):
    try:
        return as_q(token)
    except (ValueError, ZeroDivisionError, TypeError):
        _fail(path, lineno, f"bad rational {token!r}")


def _parse_int(path: str, lineno: int, token: str) -> int:
    try:
        return int(token)
    except ValueError:
        _fail(path, lineno, f"bad integer {token!r}")


# --- .vcsp ------------------------------------------------------------------

def write_vcsp(instance: VcspInstance, path: str) -> None:
    out = [f"domain {' '.join(instance.domain.labels)}"]
    for v in instance.variables:
        out.append(f"var {v}")
    seen: Dict[str, ValuedFunction] = {}
    for con in instance.constraints:
        if con.fn.name not in seen:
            seen[con.fn.name] = con.fn
    for fn in seen.values():
        out.append(f"fun {fn.name} {fn.arity}")
        for labels in sorted(fn.table.keys()):
            out.append(f"{','.join(labels)} {fn.table[labels]}")
    for con in instance.constraints:
        out.append(f"con {con.fn.name} {con.weight} {' '.join(con.scope)}")
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("\n".join(out) + "\n")


def read_vcsp(path: str) -> VcspInstance:
    domain: Optional[Domain] = None
    variables: List[str] = []
    functions: Dict[str, ValuedFunction] = {}
    constraints: List[Constraint] = []
    pending: Optional[Tuple[str, int, Dict]] = None

    def finish_pending(lineno: int):
        nonlocal pending
        if pending is None:
            return
        name, arity, table = pending
        expected = len(domain.labels) ** arity
        if len(table) != expected:
            _fail(path, lineno, f"fun {name}: {len(table)} of {expected} table rows present")
        functions[name] = ValuedFunction(name, arity, table)
        pending = None

    for lineno, tokens in _lines(path):
        head = tokens[0]
        if head == "domain":
            if len(tokens) < 2:
                _fail(path, lineno, "domain needs at least one label")
            domain = Domain(tuple(tokens[1:]))
        elif head == "var":
            finish_pending(lineno)
            if len(tokens) != 2:
                _fail(path, lineno, "var takes exactly one name")
            variables.append(tokens[1])
        elif head == "fun":
            if domain is None:
                _fail(path, lineno, "fun before domain")
            finish_pending(lineno)
            if len(tokens) != 3:
                _fail(path, lineno, "fun takes a name and an arity")
            pending = (tokens[1], _parse_int(path, lineno, tokens[2]), {})
        elif head == "con":
            finish_pending(lineno)
            if len(tokens) < 4:
                _fail(path, lineno, "con takes fun, weight and scope variables")
            name = tokens[1]
            if name not in functions:
                _fail(path, lineno, f"unknown function {name!r}")
            weight = _parse_int(path, lineno, tokens[2])
            constraints.append(Constraint(tuple(tokens[3:]), functions[name], weight))
        else:
            if pending is None:
                _fail(path, lineno, f"unexpected directive {head!r}")
            labels = tuple(head.split(","))
            if len(labels) != pending[1]:
                _fail(path, lineno, f"tuple {head!r} does not have arity {pending[1]}")
            if len(tokens) != 2:
                _fail(path, lineno, "table rows are '<tuple> <value>'")
            pending[2][labels] = _parse_int(path, lineno, tokens[1])
    finish_pending(0)
    if domain is None:
        raise ParseError(f"{path}: missing domain line")
    return VcspInstance(domain, tuple(variables), tuple(constraints))


# --- .lp --------------------------------------------------------------------

def _terms_str(coeffs, names) -> str:
    parts = []
    for coef, name in zip(coeffs, names):
        if coef:
            parts.append(f"{q_str(coef)}*{name}")
    return " ".join(parts) if parts else "0"


def write_lp(lp: ZeroOneLP, path: str) -> None:
    out = [f"var {name}" for name in lp.names]
    for row, rhs in zip(lp.a.data, lp.b):
        out.append(f"row >= {q_str(rhs)} {_terms_str(row, lp.names)}")
    out.append(f"obj {_terms_str(lp.c, lp.names)}")
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("\n".join(out) + "\n")


def _parse_terms(path: str, lineno: int, tokens, index: Dict[str, int], n: int):
    row = [Q0] * n
    for tok in tokens:
        if tok == "0" and len(tokens) == 1:
            return row
        if "*" not in tok:
            _fail(path, lineno, f"term {tok!r} is not coef*var")
        coef_s, name = tok.split("*", 1)
        if name not in index:
            _fail(path, lineno, f"unknown variable {name!r}")
        row[index[name]] += _parse_q(path, lineno, coef_s)
    return row


def read_lp(path: str) -> ZeroOneLP:
    names: List[str] = []
    rows: List[list] = []
    rhs: List = []
    objective: Optional[list] = None
    staged: List[Tuple[int, str, object, list]] = []

    for lineno, tokens in _lines(path):
        head = tokens[0]
        if head == "var":
            if len(tokens) != 2:
                _fail(path, lineno, "var takes exactly one name")
            if tokens[1] in names:
                _fail(path, lineno, f"duplicate variable {tokens[1]!r}")
            names.append(tokens[1])
        elif head == "row":
            if len(tokens) < 3:
                _fail(path, lineno, "row takes relation, rhs and terms")
            rel = tokens[1]
            if rel not in (">=", "<=", "="):
                _fail(path, lineno, f"unknown relation {rel!r}")
            staged.append((lineno, rel, tokens[2], tokens[3:]))
        elif head == "obj":
            staged.append((lineno, "obj", None, tokens[1:]))
        else:
            _fail(path, lineno, f"unexpected directive {head!r}")

    index = {name: i for i, name in enumerate(names)}
    n = len(names)
    for lineno, rel, rhs_tok, terms in staged:
        if rel == "obj":
            objective = _parse_terms(path, lineno, terms, index, n)
            continue
        value = _parse_q(path, lineno, rhs_tok)
        row = _parse_terms(path, lineno, terms, index, n)
        if rel in (">=", "="):
            rows.append(row)
            rhs.append(value)
        if rel in ("<=", "="):
            rows.append([-v for v in row])
            rhs.append(-value)
    if objective is None:
        raise ParseError(f"{path}: missing obj line")
    return ZeroOneLP(tuple(names), Matrix(rows), tuple(rhs), tuple(objective))


# --- .sdp (block pencil) ------------------------------------------------------

def write_sdp(pencil: BlockPencil, path: str, level: Optional[int] = None) -> None:
    out = ["pencil"]
    if level is not None:
        out.append(f"level {level}")
    for name in pencil.coord_names:
        out.append(f"coord {name}")
    for q, v in enumerate(pencil.objective):
        if v:
            out.append(f"obj {pencil.coord_names[q]} {q_str(v)}")
    for bi, block in enumerate(pencil.blocks):
        out.append(f"block {bi} {block.dim}")
        for i in range(block.dim):
            for j in range(i, block.dim):
                v = block.const[i][j]
                if v:
                    out.append(f"z {bi} {i} {j} {q_str(v)}")
        for q in sorted(block.coef.keys()):
            for i, j, v in block.coef[q]:
                out.append(f"y {pencil.coord_names[q]} {bi} {i} {j} {q_str(v)}")
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("\n".join(out) + "\n")


def read_sdp(path: str) -> BlockPencil:
    coords: List[str] = []
    obj_entries: Dict[str, object] = {}
    blocks_raw: List[Tuple[int, Dict, Dict]] = []  # (dim, const entries, coef entries)
    level = None

    for lineno, tokens in _lines(path):
        head = tokens[0]
        if head == "pencil":
            continue
        if head == "level":
            level = _parse_int(path, lineno, tokens[1])
        elif head == "coord":
            coords.append(tokens[1])
        elif head == "obj":
            obj_entries[tokens[1]] = _parse_q(path, lineno, tokens[2])
        elif head == "block":
            if len(tokens) != 3:
                _fail(path, lineno, "block takes an index and a dimension")
            bi = _parse_int(path, lineno, tokens[1])
            if bi != len(blocks_raw):
                _fail(path, lineno, f"block {bi} out of order")
            blocks_raw.append((_parse_int(path, lineno, tokens[2]), {}, {}))
        elif head == "z":
            if len(tokens) != 5:
                _fail(path, lineno, "z takes block, i, j, value")
            bi = _parse_int(path, lineno, tokens[1])
            if bi >= len(blocks_raw):
                _fail(path, lineno, f"z before block {bi}")
            i, j = _parse_int(path, lineno, tokens[2]), _parse_int(path, lineno, tokens[3])
            blocks_raw[bi][1][(i, j)] = _parse_q(path, lineno, tokens[4])
        elif head == "y":
            if len(tokens) != 6:
                _fail(path, lineno, "y takes coord, block, i, j, value")
            name = tokens[1]
            if name not in coords:
                _fail(path, lineno, f"unknown coordinate {name!r}")
            bi = _parse_int(path, lineno, tokens[2])
            if bi >= len(blocks_raw):
                _fail(path, lineno, f"y before block {bi}")
            i, j = _parse_int(path, lineno, tokens[3]), _parse_int(path, lineno, tokens[4])
            blocks_raw[bi][2].setdefault(coords.index(name), []).append(
                (i, j, _parse_q(path, lineno, tokens[5])))
        else:
            _fail(path, lineno, f"unexpected directive {head!r}")

    objective = [obj_entries.get(name, Q0) for name in coords]
    blocks = []
    for dim, const_entries, coef in blocks_raw:
        const = [[Q0] * dim for _ in range(dim)]
        for (i, j), v in const_entries.items():
            const[i][j] = v
            const[j][i] = v
        blocks.append(PencilBlock(dim, const, coef))
    return BlockPencil(tuple(coords), objective, blocks)


# --- .sol ---------------------------------------------------------------------

def write_sol(path: str, coord_names, point, value, delta, rounded: Optional[int]) -> None:
    out = [f"delta {q_str(delta)}", f"value {q_str(value)}"]
    if rounded is not None:
        out.append(f"rounded {rounded}")
    for name, v in zip(coord_names, point):
        out.append(f"coord {name} {q_str(v)}")
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("\n".join(out) + "\n")


def read_sol(path: str):
    delta = value = None
    rounded = None
    coords: Dict[str, object] = {}
    for lineno, tokens in _lines(path):
        head = tokens[0]
        if head == "delta":
            delta = _parse_q(path, lineno, tokens[1])
        elif head == "value":
            value = _parse_q(path, lineno, tokens[1])
        elif head == "rounded":
            rounded = _parse_int(path, lineno, tokens[1])
        elif head == "coord":
            if len(tokens) != 3:
                _fail(path, lineno, "coord takes a name and a value")
            coords[tokens[1]] = _parse_q(path, lineno, tokens[2])
        else:
            _fail(path, lineno, f"unexpected directive {head!r}")
    if delta is None or value is None:
        raise ParseError(f"{path}: missing delta or value line")
    return coords, value, delta, rounded


# --- .3lin --------------------------------------------------------------------

def write_threelin(system: LinSystem, path: str) -> None:
    out = [f"var {v}" for v in system.variables]
    for a, b, c in system.eqs0:
        out.append(f"eq0 {a} {b} {c}")
    for a, b, c in system.eqs1:
        out.append(f"eq1 {a} {b} {c}")
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("\n".join(out) + "\n")


def read_threelin(path: str) -> LinSystem:
    variables: List[str] = []
    eqs0: List[Tuple[str, str, str]] = []
    eqs1: List[Tuple[str, str, str]] = []
    for lineno, tokens in _lines(path):
        head = tokens[0]
        if head == "var":
            variables.append(tokens[1])
        elif head in ("eq0", "eq1"):
            if len(tokens) != 4:
                _fail(path, lineno, f"{head} takes exactly three variables")
            triple = (tokens[1], tokens[2], tokens[3])
            (eqs0 if head == "eq0" else eqs1).append(triple)
        else:
            _fail(path, lineno, f"unexpected directive {head!r}")
    return LinSystem(tuple(variables), tuple(eqs0), tuple(eqs1))


# --- .cnf (DIMACS with name comments) -----------------------------------------

def write_cnf(formula: CnfFormula, path: str) -> None:
    index = {v: i + 1 for i, v in enumerate(formula.variables)}
    out = [f"c var {i + 1} {v}" for i, v in enumerate(formula.variables)]
    out.append(f"p cnf {len(formula.variables)} {len(formula.clauses)}")
    for clause in formula.clauses:
        lits = [(-index[v] if neg else index[v]) for v, neg in clause]
        out.append(" ".join(str(l) for l in lits) + " 0")
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("\n".join(out) + "\n")


def read_cnf(path: str) -> CnfFormula:
    names: Dict[int, str] = {}
    clauses: List[Tuple] = []
    nvars = 0
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line:
                continue
            tokens = line.split()
            if tokens[0] == "c":
                if len(tokens) == 4 and tokens[1] == "var":
                    names[_parse_int(path, lineno, tokens[2])] = tokens[3]
                continue
            if tokens[0] == "p":
                if len(tokens) != 4 or tokens[1] != "cnf":
                    _fail(path, lineno, "bad problem line")
                nvars = _parse_int(path, lineno, tokens[2])
                continue
            lits = [_parse_int(path, lineno, t) for t in tokens]
            if not lits or lits[-1] != 0:
                _fail(path, lineno, "clause must end with 0")
            lits = lits[:-1]
            if len(lits) != 3:
                _fail(path, lineno, "clauses must have exactly 3 literals")
            clause = tuple((names.get(abs(l), f"x{abs(l)}"), l < 0) for l in lits)
            clauses.append(clause)
    variables = tuple(names.get(i, f"x{i}") for i in range(1, nvars + 1))
    return CnfFormula(variables, tuple(clauses))


# --- .graph -------------------------------------------------------------------

def write_graph(graph: WeightedGraph, path: str) -> None:
    out = [f"vertex {v}" for v in graph.vertices]
    for u, v, w in graph.edges:
        out.append(f"edge {u} {v} {w}")
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("\n".join(out) + "\n")


def read_graph(path: str) -> WeightedGraph:
    vertices: List[str] = []
    edges: List[Tuple[str, str, int]] = []
    for lineno, tokens in _lines(path):
        head = tokens[0]
        if head == "vertex":
            vertices.append(tokens[1])
        elif head == "edge":
            if len(tokens) != 4:
                _fail(path, lineno, "edge takes two endpoints and a weight")
            edges.append((tokens[1], tokens[2], _parse_int(path, lineno, tokens[3])))
        else:
            _fail(path, lineno, f"unexpected directive {head!r}")
    return graph_from_edges(edges, extra_vertices=vertices)
