"""Round trips and diagnostics for every file format."""
import pytest

from exactlift import formats
from exactlift._ratio import QQ
from exactlift.encode import to_ilp
from exactlift.errors import ParseError
from exactlift.lasserre import lift
from exactlift.reductions import LinSystem, threelin_to_threesat, threesat_to_maxcut

from corpus import inst_single_unary, inst_triangle, inst_unary_d3


def test_vcsp_round_trip(tmp_path):
    for inst in (inst_triangle(), inst_unary_d3(), inst_single_unary()):
        path = str(tmp_path / "x.vcsp")
        formats.write_vcsp(inst, path)
        back = formats.read_vcsp(path)
        assert back == inst


def test_vcsp_write_is_deterministic(tmp_path):
    p1, p2 = str(tmp_path / "a.vcsp"), str(tmp_path / "b.vcsp")
    formats.write_vcsp(inst_triangle(), p1)
    formats.write_vcsp(inst_triangle(), p2)
    assert open(p1, "rb").read() == open(p2, "rb").read()


def test_vcsp_parse_errors_carry_location(tmp_path):
    path = tmp_path / "bad.vcsp"
    path.write_text("domain 0 1\nvar v\nfun f 1\n0 1\n")  # incomplete table
    with pytest.raises(ParseError, match="bad.vcsp"):
        formats.read_vcsp(str(path))
    path.write_text("domain 0 1\nzzz v\n")
    with pytest.raises(ParseError, match=":2:"):
        formats.read_vcsp(str(path))


def test_lp_round_trip(tmp_path):
    lp = to_ilp(inst_single_unary())
    path = str(tmp_path / "x.lp")
    formats.write_lp(lp, path)
    back = formats.read_lp(path)
    assert back.names == lp.names
    assert back.a == lp.a
    assert back.b == lp.b
    assert back.c == lp.c


def test_lp_relations_expand_to_row_pairs(tmp_path):
    path = tmp_path / "rel.lp"
    path.write_text("var x\nrow <= 1 1*x\nrow = 1/2 2*x\nobj 1*x\n")
    lp = formats.read_lp(str(path))
    rows = [(tuple(r), b) for r, b in zip(lp.a.data, lp.b)]
    assert ((QQ(-1),), QQ(-1)) in rows          # from <=
    assert ((QQ(2),), QQ(1, 2)) in rows         # equality, forward
    assert ((QQ(-2),), QQ(-1, 2)) in rows       # equality, backward


def test_sdp_round_trip(tmp_path):
    pen = lift(to_ilp(inst_single_unary()), 1)
    path = str(tmp_path / "x.sdp")
    formats.write_sdp(pen.pencil, path, level=1)
    back = formats.read_sdp(path)
    assert back.coord_names == pen.pencil.coord_names
    assert back.objective == pen.pencil.objective
    assert len(back.blocks) == len(pen.pencil.blocks)
    probe = [QQ(i + 1, 7) for i in range(pen.num_coords)]
    for b1, b2 in zip(back.blocks, pen.pencil.blocks):
        assert b1.eval(probe) == b2.eval(probe)


def test_sol_round_trip(tmp_path):
    path = str(tmp_path / "x.sol")
    names = ("a", "b")
    formats.write_sol(path, names, [QQ(1, 3), QQ(-2)], QQ(7, 3), QQ(1, 100), 2)
    coords, value, delta, rounded = formats.read_sol(path)
    assert coords == {"a": QQ(1, 3), "b": QQ(-2)}
    assert value == QQ(7, 3) and delta == QQ(1, 100) and rounded == 2


def test_threelin_round_trip(tmp_path):
    system = LinSystem(("a", "b", "c", "d"), (("a", "b", "c"),), (("b", "c", "d"),))
    path = str(tmp_path / "x.3lin")
    formats.write_threelin(system, path)
    assert formats.read_threelin(path) == system


def test_cnf_round_trip(tmp_path):
    formula = threelin_to_threesat(
        LinSystem(("a", "b", "c"), (("a", "b", "c"),), ()))
    path = str(tmp_path / "x.cnf")
    formats.write_cnf(formula, path)
    assert formats.read_cnf(path) == formula


def test_graph_round_trip(tmp_path):
    formula = threelin_to_threesat(LinSystem(("a", "b", "c"), (("a", "b", "c"),), ()))
    graph, _ = threesat_to_maxcut(formula)
    path = str(tmp_path / "x.graph")
    formats.write_graph(graph, path)
    assert formats.read_graph(path) == graph


def test_cnf_requires_three_literals(tmp_path):
    path = tmp_path / "bad.cnf"
    path.write_text("p cnf 2 1\n1 -2 0\n")
    with pytest.raises(ParseError):
        formats.read_cnf(str(path))


def test_bad_rational_diagnostic(tmp_path):
    path = tmp_path / "bad.lp"
    path.write_text("var x\nrow >= zz 1*x\nobj 1*x\n")
    with pytest.raises(ParseError, match="bad rational"):
        formats.read_lp(str(path))


def test_lp_duplicate_variable_rejected(tmp_path):
    path = tmp_path / "dup.lp"
    path.write_text("var x\nvar x\nobj 1*x\n")
    with pytest.raises(ParseError, match="duplicate variable"):
        formats.read_lp(str(path))
