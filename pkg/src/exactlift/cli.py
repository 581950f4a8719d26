"""Command line front end: generation, reductions, encodings, solves.

Exit codes: 0 success, 2 parse error, 3 solver budget exhausted or capture
undetermined within the requested levels, 4 contract or cap violation.
EXACTLIFT_THREADS caps the worker threads used for batch min-level runs.
"""
from __future__ import annotations

import os
import random
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import click

from . import formats
from ._ratio import QQ, as_q, q_sqrt_ceil, q_str
from .ellipsoid import SolveOptions, ellipsoid_optimize
from .encode import maxcut_to_vcsp, to_ilp
from .errors import CapExceeded, ContractViolation, ParseError, SolverDegeneracy
from .folding import folded_optimize
from .lasserre import lift
from .linalg import Matrix, psd_certificate
from .pipeline import SOLVED, CaptureReport, RunConfig, min_capture_level
from .reductions import (LinSystem, brute_lin, brute_sat, gadget_max_cut, graph_from_edges,
                         threelin_to_threesat, threesat_to_maxcut)
from .sdp import default_rounding_tolerance, round_to_integer_optimum
from .simplex import lp_optimize

EXIT_PARSE = 2
EXIT_BUDGET = 3
EXIT_CONTRACT = 4


def thread_count() -> int:
    raw = os.environ.get("EXACTLIFT_THREADS", "1")
    try:
        n = int(raw)
    except ValueError:
        raise ContractViolation(f"EXACTLIFT_THREADS must be an integer, got {raw!r}")
    if n < 1:
        raise ContractViolation("EXACTLIFT_THREADS must be >= 1")
    return n


@click.group()
def cli():
    """Exact VCSP pipeline: encode, lift, solve, certify."""


@cli.command()
@click.option("--maxcut-cycle", type=int, default=None, help="cycle graph on n vertices")
@click.option("--maxcut-complete", type=int, default=None, help="complete graph on n vertices")
@click.option("--maxcut-path", type=int, default=None, help="path graph on n vertices")
@click.option("--threelin", nargs=2, type=int, default=None, help="random system: nvars neqs")
@click.option("--seed", type=int, default=0)
@click.option("--out", "-o", required=True, type=click.Path())
def gen(maxcut_cycle, maxcut_complete, maxcut_path, threelin, seed, out):
    """Generate an instance file (.vcsp or .3lin)."""
    chosen = [x for x in (maxcut_cycle, maxcut_complete, maxcut_path, threelin) if x]
    if len(chosen) != 1:
        raise ContractViolation("choose exactly one generator")
    if threelin:
        nvars, neqs = threelin
        if nvars < 3:
            raise ContractViolation("3LIN systems need at least 3 variables")
        rng = random.Random(seed)
        variables = tuple(f"v{i}" for i in range(nvars))
        eqs0, eqs1 = [], []
        for _ in range(neqs):
            triple = tuple(sorted(rng.sample(range(nvars), 3)))
            eq = tuple(variables[i] for i in triple)
            (eqs0 if rng.random() < 0.5 else eqs1).append(eq)
        formats.write_threelin(LinSystem(variables, tuple(eqs0), tuple(eqs1)), out)
        click.echo(f"wrote {out}")
        return
    if maxcut_cycle:
        n = maxcut_cycle
        edges = [(f"v{i}", f"v{(i + 1) % n}", 1) for i in range(n)]
    elif maxcut_complete:
        n = maxcut_complete
        edges = [(f"v{i}", f"v{j}", 1) for i in range(n) for j in range(i + 1, n)]
    else:
        n = maxcut_path
        edges = [(f"v{i}", f"v{i + 1}", 1) for i in range(n - 1)]
    graph = graph_from_edges(edges, extra_vertices=[f"v{i}" for i in range(n)])
    formats.write_vcsp(maxcut_to_vcsp(graph), out)
    click.echo(f"wrote {out}")


@cli.command()
@click.option("--chain", type=click.Choice(["3lin"]), required=True)
@click.argument("path", type=click.Path(exists=True))
def reduce(chain, path):
    """Run the reduction chain on a .3lin file, writing .cnf and .graph."""
    system = formats.read_threelin(path)
    formula = threelin_to_threesat(system)
    graph, threshold = threesat_to_maxcut(formula)
    base = str(Path(path).with_suffix(""))
    formats.write_cnf(formula, base + ".cnf")
    formats.write_graph(graph, base + ".graph")
    click.echo(f"wrote {base}.cnf ({len(formula.clauses)} clauses)")
    click.echo(f"wrote {base}.graph ({len(graph.vertices)} vertices, threshold {threshold})")
    try:
        lin_sat = brute_lin(system)
        sat = brute_sat(formula)
        cut = gadget_max_cut(formula)
        click.echo(f"satisfiability preserved: 3lin={lin_sat} 3sat={sat} "
                   f"maxcut>=threshold={cut >= threshold}")
    except CapExceeded:
        click.echo("satisfiability check skipped (instance beyond brute-force caps)")


@cli.command()
@click.argument("path", type=click.Path(exists=True))
@click.option("--out", "-o", type=click.Path(), default=None)
def encode(path, out):
    """Encode a .vcsp instance as its 0-1 LP (.lp)."""
    instance = formats.read_vcsp(path)
    lp = to_ilp(instance)
    out = out or str(Path(path).with_suffix(".lp"))
    formats.write_lp(lp, out)
    click.echo(f"wrote {out} ({lp.num_vars} variables, {lp.a.rows} rows)")


@cli.command("lift")
@click.argument("path", type=click.Path(exists=True))
@click.option("--level", "-t", type=int, required=True)
@click.option("--out", "-o", type=click.Path(), default=None)
def lift_cmd(path, level, out):
    """Lift a 0-1 LP (.lp) to its level-t SDP pencil (.sdp)."""
    lp = formats.read_lp(path)
    pencil = lift(lp, level)
    out = out or str(Path(path).with_suffix(f".t{level}.sdp"))
    formats.write_sdp(pencil.pencil, out, level=level)
    click.echo(f"wrote {out} ({pencil.num_coords} coordinates, {len(pencil.pencil.blocks)} blocks)")


@cli.command("solve-blp")
@click.argument("path", type=click.Path(exists=True))
def solve_blp(path):
    """Solve the LP relaxation of a .vcsp instance (or a raw .lp) exactly."""
    if path.endswith(".vcsp"):
        lp = to_ilp(formats.read_vcsp(path))
    else:
        lp = formats.read_lp(path)
    res = lp_optimize(lp.a, list(lp.b), list(lp.c))
    if res.status != "optimal":
        click.echo(f"status: {res.status}")
        return
    click.echo(f"value: {q_str(res.value)}")
    for name, v in zip(lp.names, res.x):
        if v:
            click.echo(f"  {name} = {q_str(v)}")


@cli.command("solve-sdp")
@click.argument("path", type=click.Path(exists=True))
@click.option("--delta", default=None, help="tolerance as p/q (default: rounding tolerance)")
@click.option("--radius", default=None, help="ellipsoid radius override as p/q")
@click.option("--folding", is_flag=True, default=False)
@click.option("--budget", type=int, default=None, help="iteration budget override")
@click.option("--out", "-o", type=click.Path(), default=None, help="solution file (.sol)")
def solve_sdp(path, delta, radius, folding, budget, out):
    """Solve an .sdp pencil by the ellipsoid method and round the value."""
    pencil = formats.read_sdp(path)
    dlt = as_q(delta) if delta else default_rounding_tolerance(pencil.objective)
    rad = as_q(radius) if radius else q_sqrt_ceil(QQ(max(1, pencil.num_coords))) + 1
    solver = folded_optimize if folding else ellipsoid_optimize
    result = solver(pencil, dlt, rad, SolveOptions(budget=budget))
    click.echo(f"status: {result.status} (iterations {result.iterations})")
    if result.status == "empty":
        return
    if result.value is not None:
        click.echo(f"value: {q_str(result.value)}")
        try:
            rounded = round_to_integer_optimum(result.value, pencil.objective)
            click.echo(f"rounded: {rounded}")
        except ContractViolation:
            rounded = None
            click.echo("rounded: undefined (half-integral value)")
        if out:
            formats.write_sol(out, pencil.coord_names, result.point, result.value, dlt, rounded)
            click.echo(f"wrote {out}")
    if result.status == "budget_exhausted":
        sys.exit(EXIT_BUDGET)


def _capture_table(name: str, report: CaptureReport) -> str:
    lines = [f"instance: {name}",
             f"opt: {report.opt}    blp: {q_str(report.blp)}"]
    lines.append(f"{'level':>5}  {'status':<18} {'value':<12} {'rounded':<8} captured")
    for lvl in report.levels:
        value = q_str(lvl.value) if lvl.value is not None else "-"
        rounded = str(lvl.rounded) if lvl.rounded is not None else "-"
        captured = "yes" if (lvl.status == SOLVED and lvl.rounded == report.opt) else "no"
        lines.append(f"{lvl.level:>5}  {lvl.status:<18} {value:<12} {rounded:<8} {captured}")
    tail = report.capture_level if report.captured else f"not captured <= {report.t_max}"
    lines.append(f"capture level: {tail}")
    return "\n".join(lines)


def _capture_csv_rows(name: str, report: CaptureReport):
    rows = []
    for lvl in report.levels:
        rows.append({
            "instance": name,
            "opt": report.opt,
            "blp": q_str(report.blp),
            "level": lvl.level,
            "status": lvl.status,
            "value": q_str(lvl.value) if lvl.value is not None else "",
            "rounded": lvl.rounded if lvl.rounded is not None else "",
            "captured": int(lvl.status == SOLVED and lvl.rounded == report.opt),
        })
    return rows


@cli.command("min-level")
@click.argument("paths", type=click.Path(exists=True), nargs=-1, required=True)
@click.option("--t-max", type=int, default=2)
@click.option("--delta", default=None, help="tolerance as p/q (default: rounding tolerance)")
@click.option("--guard", type=int, default=120, help="max pencil coordinates per level")
@click.option("--budget", type=int, default=None, help="iteration budget override")
@click.option("--folding", is_flag=True, default=False)
@click.option("--csv", "csv_out", type=click.Path(), default=None, help="also write CSV")
def min_level(paths, t_max, delta, guard, budget, folding, csv_out):
    """Minimum capture level of .vcsp instances (the full pipeline)."""
    config = RunConfig(t_max=t_max, delta=as_q(delta) if delta else None,
                       coord_guard=guard, budget=budget, folding=folding)
    workers = min(thread_count(), len(paths))

    def run(path):
        return path, min_capture_level(formats.read_vcsp(path), t_max, config)

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(run, paths))
    else:
        results = [run(p) for p in paths]

    undetermined = False
    csv_rows = []
    for path, report in results:
        click.echo(_capture_table(path, report))
        click.echo("")
        csv_rows.extend(_capture_csv_rows(path, report))
        if not report.captured:
            undetermined = True
    if csv_out:
        header = ["instance", "opt", "blp", "level", "status", "value", "rounded", "captured"]
        lines = [",".join(header)]
        for row in csv_rows:
            lines.append(",".join(str(row[h]) for h in header))
        with open(csv_out, "w", encoding="utf-8") as fh:
            fh.write("\n".join(lines) + "\n")
        click.echo(f"wrote {csv_out}")
    if undetermined:
        sys.exit(EXIT_BUDGET)


@cli.command()
@click.argument("sdp_path", type=click.Path(exists=True))
@click.argument("sol_path", type=click.Path(exists=True))
def certify(sdp_path, sol_path):
    """Exactly re-check an emitted solution against its pencil."""
    pencil = formats.read_sdp(sdp_path)
    coords, value, delta, rounded = formats.read_sol(sol_path)
    missing = [n for n in pencil.coord_names if n not in coords]
    if missing:
        raise ParseError(f"{sol_path}: solution misses coordinates {missing[:3]}...")
    x = [coords[n] for n in pencil.coord_names]

    recomputed = sum((cv * xv for cv, xv in zip(pencil.objective, x)), QQ(0))
    ok = True
    if recomputed != value:
        click.echo(f"FAIL objective: stated {q_str(value)}, recomputed {q_str(recomputed)}")
        ok = False
    else:
        click.echo(f"OK objective value {q_str(value)}")

    for bi, block in enumerate(pencil.blocks):
        w = Matrix(block.eval(x)).shifted(delta)
        if psd_certificate(w).is_psd:
            click.echo(f"OK block {bi}: PSD within delta")
        else:
            click.echo(f"FAIL block {bi}: not PSD even with delta slack")
            ok = False

    if rounded is not None:
        if abs(value - rounded) <= QQ(1, 4):
            click.echo(f"OK rounding: |{q_str(value)} - {rounded}| <= 1/4")
        else:
            click.echo(f"FAIL rounding: |{q_str(value)} - {rounded}| > 1/4")
            ok = False
    if not ok:
        sys.exit(EXIT_CONTRACT)
    click.echo("certificate: all checks passed")


def main():
    try:
        cli(standalone_mode=False)
    except ParseError as exc:
        click.echo(f"parse error: {exc}", err=True)
        sys.exit(EXIT_PARSE)
    except (ContractViolation, CapExceeded) as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(EXIT_CONTRACT)
    except SolverDegeneracy as exc:
        click.echo(f"solver: {exc}", err=True)
        sys.exit(EXIT_BUDGET)
    except click.ClickException as exc:
        exc.show()
        sys.exit(exc.exit_code)
    except click.exceptions.Abort:
        sys.exit(1)


if __name__ == "__main__":
    main()
