"""Command-line surface.

Exit codes: 0 on success, 1 on domain errors (bad complexes, infeasible
targets, solver failures, I/O), 2 on usage errors. All commands are
deterministic for fixed flags and seed.

Boundary radii are given by a mini-language:
  const:<x>              every boundary vertex gets radius x
  perturb:<x>:<amp>:<s>  x * (1 + amp * u), u ~ Uniform(-1, 1) seeded by s
  file:<path>            boundary values read from a .lbl file
"""

from __future__ import annotations

import functools
import math
from concurrent.futures import ThreadPoolExecutor

import click
import numpy as np

from .errors import DiscpackError, FormatError
from .labels import (
    BranchSet,
    Label,
    read_brs,
    read_lbl,
    solve_boundary_value,
    targets_from_branch_set,
    write_lbl,
)
from .layout import SvgOptions, layout_packing, ratio_map, to_svg
from .network import (
    label_conductances,
    monte_carlo_return,
    recurrence_profile,
    simple_network,
    transition_kernel,
)
from .triangulation import (
    hex_ball,
    hex_ball_vertex_count,
    read_cpx,
    star,
    write_cpx,
)
from .variation import angle_sum_derivative


def domain_errors(fn):
    """Map domain failures onto exit code 1 with a clean message."""
    @functools.wraps(fn)
    def wrapper(*args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except (DiscpackError, OSError) as exc:
            raise click.ClickException(f"{type(exc).__name__}: {exc}")
    return wrapper


def parse_boundary_spec(spec: str, complex) -> dict[int, float]:
    bverts = complex.boundary_vertices
    parts = spec.split(":")
    if parts[0] == "const" and len(parts) == 2:
        value = float(parts[1])
        return {v: value for v in bverts}
    if parts[0] == "perturb" and len(parts) == 4:
        base, amp, seed = float(parts[1]), float(parts[2]), int(parts[3])
        u = np.random.default_rng(seed).uniform(-1.0, 1.0, len(bverts))
        return {v: base * (1.0 + amp * x) for v, x in zip(bverts, u)}
    if parts[0] == "file" and len(parts) >= 2:
        label = read_lbl(spec.split(":", 1)[1])
        if len(label) < complex.vertex_count:
            raise FormatError("label file does not cover the complex")
        return {v: label[v] for v in bverts}
    raise click.UsageError(f"bad boundary spec {spec!r}")


def parse_branch_spec(spec: str) -> BranchSet:
    if not spec:
        return BranchSet.empty()
    entries = []
    for item in spec.split(","):
        try:
            v, n = item.split(":")
            entries.append((int(v), int(n)))
        except ValueError:
            raise click.UsageError(f"bad branch spec item {item!r}")
    return BranchSet(tuple(entries))


def _emit(lines, out):
    text = "\n".join(lines) + "\n"
    if out is None:
        click.echo(text, nl=False)
    else:
        with open(out, "w", newline="\n") as fh:
            fh.write(text)


@click.group()
def cli():
    """Circle packings on disc triangulations."""


@cli.command()
@click.argument("kind", type=click.Choice(["star", "hexball"]))
@click.argument("size", type=int)
@click.option("--out", type=click.Path(), default=None,
              help="Write the .cpx here instead of stdout.")
@domain_errors
def gen(kind, size, out):
    """Generate a star or hexagonal-ball complex as .cpx."""
    complex = star(size) if kind == "star" else hex_ball(size)
    if out is None:
        lines = ["CPX 1"]
        lines += [f"V {v} {1 if complex.boundary[v] else 0}"
                  for v in range(complex.vertex_count)]
        lines += [f"F {a} {b} {c}" for a, b, c in complex.faces]
        _emit(lines, None)
    else:
        write_cpx(complex, out)


@cli.command()
@click.option("--cpx", required=True, type=click.Path(exists=True))
@click.option("--brs", type=click.Path(exists=True), default=None,
              help="Branch orders file.")
@click.option("--branch", default="", help="Inline branch spec v:n[,v:n...].")
@click.option("--boundary", default="const:1", show_default=True)
@click.option("--tol", default=1e-10, show_default=True)
@click.option("--max-iter", default=100_000, show_default=True)
@click.option("--out", required=True, type=click.Path())
@domain_errors
def solve(cpx, brs, branch, boundary, tol, max_iter, out):
    """Solve the boundary-value problem and write the label as .lbl."""
    complex = read_cpx(cpx)
    if brs and branch:
        raise click.UsageError("give either --brs or --branch, not both")
    branch_set = read_brs(brs) if brs else parse_branch_spec(branch)
    targets = targets_from_branch_set(complex, branch_set)
    radii = parse_boundary_spec(boundary, complex)
    label, report = solve_boundary_value(complex, targets, radii, tol=tol,
                                         max_iter=max_iter)
    write_lbl(label, out)
    click.echo(f"converged={report.converged} iterations={report.iterations} "
               f"max_residual={report.max_residual!r}")


@cli.command()
@click.option("--cpx", required=True, type=click.Path(exists=True))
@click.option("--lbl", required=True, type=click.Path(exists=True))
@click.option("--root-face", default=0, show_default=True)
@click.option("--out", type=click.Path(), default=None)
@domain_errors
def layout(cpx, lbl, root_face, out):
    """Lay out circle centers; emits CSV vertex,x,y."""
    complex = read_cpx(cpx)
    label = read_lbl(lbl)
    packing = layout_packing(complex, label, root_face=root_face)
    lines = ["vertex,x,y"]
    lines += [f"{v},{float(x)!r},{float(y)!r}"
              for v, (x, y) in enumerate(packing.centers)]
    _emit(lines, out)


@cli.command()
@click.option("--cpx", required=True, type=click.Path(exists=True))
@click.option("--lbl", required=True, type=click.Path(exists=True))
@click.option("--out", required=True, type=click.Path())
@click.option("--scale", default=100.0, show_default=True)
@click.option("--stroke-width", default=1.0, show_default=True)
@click.option("--carrier/--no-carrier", default=False, show_default=True)
@click.option("--brs", type=click.Path(exists=True), default=None,
              help="Highlight these branch vertices.")
@click.option("--branch-color", default="#d62728", show_default=True)
@domain_errors
def svg(cpx, lbl, out, scale, stroke_width, carrier, brs, branch_color):
    """Render a laid-out packing as SVG."""
    complex = read_cpx(cpx)
    label = read_lbl(lbl)
    packing = layout_packing(complex, label)
    branch = read_brs(brs) if brs else BranchSet.empty()
    options = SvgOptions(scale=scale, stroke_width=stroke_width,
                         carrier=carrier,
                         branch_vertices=tuple(v for v, _ in branch.entries),
                         branch_color=branch_color)
    to_svg(packing, out, options)


@cli.command()
@click.option("--hexball", "levels", required=True, type=int,
              help="Profile hex balls of radius 1..N.")
@click.option("--conductance", type=click.Choice(["unit", "flat-label"]),
              default="unit", show_default=True)
@click.option("--out", type=click.Path(), default=None)
@domain_errors
def resist(levels, conductance, out):
    """Effective resistance center-to-boundary across hex balls (CSV)."""
    if conductance == "unit":
        builder = simple_network
    else:
        builder = lambda K: label_conductances(K, Label.constant(K))
    profile = recurrence_profile(levels, builder)
    lines = ["level,resistance"]
    lines += [f"{k},{r!r}" for k, r in profile.rows()]
    _emit(lines, out)


@cli.command()
@click.option("--hexball", type=int, default=None)
@click.option("--cpx", type=click.Path(exists=True), default=None)
@click.option("--lbl", type=click.Path(exists=True), default=None,
              help="Use label-derived conductances instead of the simple walk.")
@click.option("--root", default=0, show_default=True)
@click.option("--max-steps", default=200, show_default=True)
@click.option("--trials", default=10_000, show_default=True)
@click.option("--seed", default=0, show_default=True)
@click.option("--threads", default=1, show_default=True)
@click.option("--out", type=click.Path(), default=None)
@domain_errors
def walk(hexball, cpx, lbl, root, max_steps, trials, seed, threads, out):
    """Monte Carlo return-probability estimate (CSV)."""
    if (hexball is None) == (cpx is None):
        raise click.UsageError("give exactly one of --hexball or --cpx")
    complex = hex_ball(hexball) if hexball is not None else read_cpx(cpx)
    if lbl:
        net = label_conductances(complex, read_lbl(lbl))
    else:
        net = simple_network(complex)
    est = monte_carlo_return(transition_kernel(net), root, max_steps, trials,
                             seed, threads=threads)
    _emit(["trials,estimate,stderr",
           f"{est.trials},{est.estimate!r},{est.stderr!r}"], out)


@cli.command()
@click.option("--star", "petal_count", required=True, type=int)
@click.option("--direction", type=click.Choice(["petals", "center", "scale",
                                                "random"]),
              default="petals", show_default=True)
@click.option("--radii", type=click.Choice(["unit", "random"]),
              default="unit", show_default=True)
@click.option("--seed", default=0, show_default=True)
@domain_errors
def dtheta(petal_count, direction, radii, seed):
    """Closed-form derivative of a flower's hub angle sum."""
    S = star(petal_count)
    rng = np.random.default_rng(seed)
    if radii == "unit":
        rho = np.ones(S.vertex_count)
    else:
        rho = np.exp(rng.uniform(math.log(0.1), math.log(10),
                                 S.vertex_count))
    if direction == "petals":
        vel = np.ones(S.vertex_count)
        vel[0] = 0.0
    elif direction == "center":
        vel = np.zeros(S.vertex_count)
        vel[0] = 1.0
    elif direction == "scale":
        vel = rho.copy()
    else:
        vel = rng.uniform(-1.0, 1.0, S.vertex_count)
    click.echo(f"{angle_sum_derivative(S, rho, vel):.12g}")


def _oscillation_rows(n_max, amplitude, seed, branch_set, tol, threads):
    """Shared engine of the flattening experiments: per level k, solve with
    a flat and a perturbed boundary and compare ratio-map oscillation on
    the half-radius sub-ball against the boundary."""

    def level_row(k):
        complex = hex_ball(k)
        targets = targets_from_branch_set(complex, branch_set)
        flat, _ = solve_boundary_value(complex, targets, 1.0, tol=tol)
        u = np.random.default_rng([seed, k]).uniform(
            -1.0, 1.0, len(complex.boundary_vertices))
        perturbed = {v: 1.0 * (1.0 + amplitude * x)
                     for v, x in zip(complex.boundary_vertices, u)}
        bumpy, _ = solve_boundary_value(complex, targets, perturbed, tol=tol)
        rm = ratio_map(flat, bumpy)
        inner = rm.oscillation(range(hex_ball_vertex_count(k // 2)))
        outer = rm.oscillation(complex.boundary_vertices)
        return k, inner, outer

    ks = range(2, n_max + 1)
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            rows = list(pool.map(level_row, ks))
    else:
        rows = [level_row(k) for k in ks]
    lines = ["level,inner_osc,boundary_osc"]
    lines += [f"{k},{inner!r},{outer!r}" for k, inner, outer in rows]
    return lines


@cli.command()
@click.option("--n-max", default=6, show_default=True)
@click.option("--amplitude", default=0.1, show_default=True)
@click.option("--seed", default=0, show_default=True)
@click.option("--tol", default=1e-10, show_default=True)
@click.option("--threads", default=1, show_default=True)
@click.option("--out", type=click.Path(), default=None)
@domain_errors
def liouville(n_max, amplitude, seed, tol, threads, out):
    """Ratio-map flattening under bounded boundary perturbations (CSV)."""
    if n_max < 3:
        raise click.UsageError("--n-max must be at least 3")
    _emit(_oscillation_rows(n_max, amplitude, seed, BranchSet.empty(), tol,
                            threads), out)


@cli.command()
@click.option("--n-max", default=6, show_default=True)
@click.option("--branch", default="0:1", show_default=True,
              help="Branch spec shared by both solves.")
@click.option("--amplitude", default=0.1, show_default=True)
@click.option("--seed", default=0, show_default=True)
@click.option("--tol", default=1e-10, show_default=True)
@click.option("--threads", default=1, show_default=True)
@click.option("--out", type=click.Path(), default=None)
@domain_errors
def uniqueness(n_max, branch, amplitude, seed, tol, threads, out):
    """Flattening experiment with a shared branch set (CSV)."""
    if n_max < 3:
        raise click.UsageError("--n-max must be at least 3")
    _emit(_oscillation_rows(n_max, amplitude, seed, parse_branch_spec(branch),
                            tol, threads), out)


def main():
    cli(prog_name="discpack")


if __name__ == "__main__":
    main()
