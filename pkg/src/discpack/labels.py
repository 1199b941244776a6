"""Radius labels, angle sums, and the boundary-value solver.

A label assigns a positive radius to every vertex. The angle a face
contributes at one of its corners is the arccos of

    ((rv+ru)^2 + (rv+rw)^2 - (ru+rw)^2) / (2 (rv+ru)(rv+rw)),

the corner angle of the euclidean triangle whose side lengths are the
pairwise radius sums. Prescribing the interior angle sums and the boundary
radii determines the label uniquely; `solve_boundary_value` finds it by
Gauss-Seidel sweeps with a safeguarded-Newton monotone solve per vertex.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

import numpy as np

from . import _kernels
from .errors import (
    BoundaryVertex,
    BranchOnBoundary,
    DegenerateFace,
    FormatError,
    HypothesisNotMet,
    InfeasibleOrder,
    InfeasibleTarget,
    IoFailure,
    NotConverged,
    UnknownVertex,
)
from .triangulation import TriangulationComplex

TWO_PI = 2.0 * math.pi

DEFAULT_TOL = 1e-10
DEFAULT_MAX_SWEEPS = 100_000


@dataclass(frozen=True)
class Label:
    """Positive radius per vertex."""

    radii: np.ndarray

    def __post_init__(self):
        radii = np.asarray(self.radii, dtype=np.float64)
        if radii.ndim != 1:
            raise ValueError("radii must be a flat vector")
        if not np.all(np.isfinite(radii)) or np.any(radii <= 0.0):
            raise ValueError("radii must be finite and positive")
        object.__setattr__(self, "radii", radii)

    @classmethod
    def constant(cls, complex: TriangulationComplex, value: float = 1.0) -> "Label":
        return cls(np.full(complex.vertex_count, float(value)))

    def __len__(self) -> int:
        return len(self.radii)

    def __getitem__(self, v: int) -> float:
        return float(self.radii[v])

    def scaled(self, c: float) -> "Label":
        return Label(self.radii * float(c))

    def with_radius(self, v: int, value: float) -> "Label":
        radii = self.radii.copy()
        radii[v] = value
        return Label(radii)


@dataclass(frozen=True)
class BranchSet:
    """Branch orders at interior vertices; order n means angle sum 2*pi*(n+1)."""

    entries: tuple[tuple[int, int], ...]

    def __post_init__(self):
        seen = set()
        norm = []
        for v, n in self.entries:
            v, n = int(v), int(n)
            if n < 1:
                raise ValueError(f"branch order must be >= 1, got {n} at {v}")
            if v in seen:
                raise ValueError(f"duplicate branch vertex {v}")
            seen.add(v)
            norm.append((v, n))
        object.__setattr__(self, "entries", tuple(sorted(norm)))

    @classmethod
    def empty(cls) -> "BranchSet":
        return cls(())

    def order(self, v: int) -> int:
        for w, n in self.entries:
            if w == v:
                return n
        return 0

    def __len__(self) -> int:
        return len(self.entries)


@dataclass(frozen=True)
class TargetAngles:
    """Prescribed angle sum per interior vertex, in radians."""

    targets: Mapping[int, float]

    def __post_init__(self):
        targets = {int(v): float(t) for v, t in self.targets.items()}
        for v, t in targets.items():
            if t <= 0.0:
                raise ValueError(f"target at {v} must be positive, got {t}")
        object.__setattr__(self, "targets", targets)

    @classmethod
    def flat(cls, complex: TriangulationComplex) -> "TargetAngles":
        return cls({v: TWO_PI for v in complex.interior_vertices})

    def __getitem__(self, v: int) -> float:
        return self.targets[v]

    def as_array(self, complex: TriangulationComplex) -> np.ndarray:
        out = np.full(complex.vertex_count, np.nan)
        for v, t in self.targets.items():
            out[v] = t
        return out


@dataclass(frozen=True)
class SolveReport:
    iterations: int
    max_residual: float
    converged: bool


def _radii_of(rho) -> np.ndarray:
    if isinstance(rho, Label):
        return rho.radii
    return np.asarray(rho, dtype=np.float64)


def angle(rho, v: int, face: Sequence[int]) -> float:
    """Angle the face contributes at vertex `v` under the label `rho`."""
    radii = _radii_of(rho)
    if v not in tuple(face):
        raise UnknownVertex(f"vertex {v} is not a corner of face {tuple(face)}")
    u, w = (x for x in face if x != v)
    rv, ru, rw = float(radii[v]), float(radii[u]), float(radii[w])
    x = rv + ru
    y = rv + rw
    z = ru + rw
    arg = (x * x + y * y - z * z) / (2.0 * x * y)
    if not abs(arg) <= 1.0 + 1e-12:  # also catches nan
        raise DegenerateFace(f"arccos argument {arg} outside [-1, 1] "
                             f"at vertex {v} of face {tuple(face)}")
    return math.acos(min(1.0, max(-1.0, arg)))


def angle_sums(complex: TriangulationComplex, rho,
               vertices: Iterable[int] | None = None) -> np.ndarray:
    """Angle sums at the given vertices (default: all interior vertices)."""
    if vertices is None:
        vertices = complex.interior_vertices
    verts = np.asarray(list(vertices), dtype=np.int32)
    return _kernels.angle_sums(_radii_of(rho), complex.fan_a, complex.fan_b,
                               complex.fan_offsets, verts)


def angle_sum(complex: TriangulationComplex, rho, v: int) -> float:
    """Total angle at the interior vertex `v`."""
    complex._check_vertex(v)
    if complex.boundary[v]:
        raise BoundaryVertex(f"vertex {v} is a boundary vertex")
    return float(angle_sums(complex, rho, [v])[0])


def targets_from_branch_set(complex: TriangulationComplex,
                            branch: BranchSet) -> TargetAngles:
    """Angle-sum targets 2*pi everywhere, lifted to 2*pi*(n+1) on branches.

    A branch of order n at a vertex of degree d is infeasible when
    2*pi*(n+1) >= d*pi, the supremum of the angle sum as the radius
    shrinks to zero.
    """
    targets = {v: TWO_PI for v in complex.interior_vertices}
    for v, n in branch.entries:
        complex._check_vertex(v)
        if complex.boundary[v]:
            raise BranchOnBoundary(f"branch vertex {v} lies on the boundary")
        theta = TWO_PI * (n + 1)
        if theta >= complex.degree(v) * math.pi:
            raise InfeasibleOrder(
                f"order {n} at vertex {v} needs angle sum {theta:.6g} "
                f">= degree bound {complex.degree(v)} * pi")
        targets[v] = theta
    return TargetAngles(targets)


def is_subpacking(complex: TriangulationComplex, rho, targets: TargetAngles,
                  tol: float = 1e-10) -> tuple[bool, dict[int, float]]:
    """Whether angle sums dominate the targets; returns per-vertex slack."""
    interior = complex.interior_vertices
    sums = angle_sums(complex, rho, interior)
    slack = {v: float(sums[i] - targets[v]) for i, v in enumerate(interior)}
    return all(s >= -tol for s in slack.values()), slack


def _boundary_array(complex: TriangulationComplex, boundary_radii) -> np.ndarray:
    bverts = complex.boundary_vertices
    if isinstance(boundary_radii, Mapping):
        missing = [v for v in bverts if v not in boundary_radii]
        if missing:
            raise InfeasibleTarget(f"no boundary radius for vertex {missing[0]}")
        vals = np.array([float(boundary_radii[v]) for v in bverts])
    elif np.isscalar(boundary_radii):
        vals = np.full(len(bverts), float(boundary_radii))
    else:
        vals = np.asarray(boundary_radii, dtype=np.float64)
        if vals.shape != (len(bverts),):
            raise InfeasibleTarget(
                f"boundary radii must match the {len(bverts)} boundary "
                f"vertices (in id order), got shape {vals.shape}")
    if not np.all(np.isfinite(vals)) or np.any(vals <= 0.0):
        raise InfeasibleTarget("boundary radii must be finite and positive")
    return vals


def solve_boundary_value(complex: TriangulationComplex, targets: TargetAngles,
                         boundary_radii, tol: float = DEFAULT_TOL,
                         max_iter: int = DEFAULT_MAX_SWEEPS,
                         fixed: Mapping[int, float] | None = None,
                         scheme: str = "gauss-seidel",
                         initial: Label | None = None
                         ) -> tuple[Label, SolveReport]:
    """Solve for the unique label with the given boundary radii whose
    interior angle sums meet `targets` within `tol`.

    `fixed` pins extra interior vertices at a prescribed radius and drops
    their angle-sum equations (their targets are ignored). `scheme` is
    "gauss-seidel" or "jacobi"; both reach the same fixed point.
    """
    fixed = dict(fixed or {})
    bvals = _boundary_array(complex, boundary_radii)

    free = [v for v in complex.interior_vertices if v not in fixed]
    for v in free:
        if v not in targets.targets:
            raise InfeasibleTarget(f"no target angle sum at interior vertex {v}")
        theta = targets[v]
        if not 0.0 < theta < complex.degree(v) * math.pi:
            raise InfeasibleTarget(
                f"target {theta:.6g} at vertex {v} outside "
                f"(0, {complex.degree(v)} * pi)")

    radii = np.empty(complex.vertex_count, dtype=np.float64)
    radii[list(complex.boundary_vertices)] = bvals
    for v, r in fixed.items():
        complex._check_vertex(v)
        if complex.boundary[v]:
            raise InfeasibleTarget(f"fixed vertex {v} is already a boundary vertex")
        if not (np.isfinite(r) and r > 0):
            raise InfeasibleTarget(f"fixed radius at {v} must be positive")
        radii[v] = r
    if initial is not None:
        if len(initial) != complex.vertex_count:
            raise InfeasibleTarget("initial label does not fit the complex")
        radii[free] = initial.radii[free]
    else:
        radii[free] = float(np.exp(np.mean(np.log(bvals))))

    target_arr = np.zeros(complex.vertex_count, dtype=np.float64)
    for v in free:
        target_arr[v] = targets[v]
    order = np.asarray(free, dtype=np.int32)

    if scheme == "gauss-seidel":
        sweeps, maxres, converged = _kernels.relax(
            radii, target_arr, complex.fan_a, complex.fan_b,
            complex.fan_offsets, order, tol, max_iter)
    elif scheme == "jacobi":
        sweeps, maxres, converged = _jacobi(complex, radii, target_arr, order,
                                            tol, max_iter)
    else:
        raise ValueError(f"unknown scheme {scheme!r}")

    report = SolveReport(iterations=int(sweeps), max_residual=float(maxres),
                         converged=bool(converged))
    label = Label(radii)
    if not converged:
        raise NotConverged(report)
    return label, report


def _jacobi(complex, radii, target_arr, order, tol, max_iter):
    off = complex.fan_offsets
    sweeps = 0
    maxres = math.inf
    while sweeps < max_iter:
        sweeps += 1
        new = radii.copy()
        for v in order:
            new[v] = _kernels.solve_vertex(radii, complex.fan_a, complex.fan_b,
                                           int(off[v]), int(off[v + 1]),
                                           float(radii[v]),
                                           float(target_arr[v]))
        radii[:] = new
        sums = _kernels.angle_sums(radii, complex.fan_a, complex.fan_b,
                                   complex.fan_offsets, order)
        maxres = float(np.max(np.abs(sums - target_arr[order]))) if len(order) else 0.0
        if maxres <= tol:
            return sweeps, maxres, True
    return sweeps, maxres, False


@dataclass(frozen=True)
class MaxPrincipleVerdict:
    """Outcome of the boundary-ratio bound check."""

    holds: bool
    boundary_min: float
    boundary_max: float
    worst_low: tuple[int, float] | None
    worst_high: tuple[int, float] | None


def check_max_principle(complex: TriangulationComplex, rho1, rho2,
                        tol: float = 1e-9,
                        check_hypothesis: bool = True) -> MaxPrincipleVerdict:
    """Check that rho2/rho1 stays inside its boundary range everywhere.

    The premise (angle sums of rho2 dominate those of rho1) is verified
    unless `check_hypothesis` is false, which is useful for negative
    controls on deliberately broken inputs.
    """
    r1 = _radii_of(rho1)
    r2 = _radii_of(rho2)
    if r1.shape != r2.shape or len(r1) != complex.vertex_count:
        raise HypothesisNotMet("labels do not live on this complex")
    if check_hypothesis:
        sums1 = angle_sums(complex, r1)
        sums2 = angle_sums(complex, r2)
        if np.any(sums2 < sums1 - 1e-9):
            raise HypothesisNotMet(
                "angle sums of rho2 do not dominate those of rho1")

    ratio = r2 / r1
    bidx = list(complex.boundary_vertices)
    bmin = float(np.min(ratio[bidx]))
    bmax = float(np.max(ratio[bidx]))
    worst_low = worst_high = None
    for v in complex.interior_vertices:
        rv = float(ratio[v])
        if rv < bmin - tol and (worst_low is None or rv < worst_low[1]):
            worst_low = (v, rv)
        if rv > bmax + tol and (worst_high is None or rv > worst_high[1]):
            worst_high = (v, rv)
    return MaxPrincipleVerdict(holds=worst_low is None and worst_high is None,
                               boundary_min=bmin, boundary_max=bmax,
                               worst_low=worst_low, worst_high=worst_high)


# -- .lbl / .brs text formats -------------------------------------------------

def write_lbl(label: Label, path) -> None:
    lines = ["LBL 1"]
    for v, r in enumerate(label.radii):
        lines.append(f"L {v} {float(r)!r}")
    try:
        with open(path, "w", newline="\n") as fh:
            fh.write("\n".join(lines) + "\n")
    except OSError as exc:
        raise IoFailure(str(exc)) from exc


def read_lbl(path) -> Label:
    entries = _read_tagged(path, "LBL 1", "L", 2)
    radii = np.empty(len(entries))
    for v, fields in entries.items():
        try:
            radii[v] = float(fields[0])
        except ValueError as exc:
            raise FormatError(f"bad radius for vertex {v}: {fields[0]!r}") from exc
    try:
        return Label(radii)
    except ValueError as exc:
        raise FormatError(str(exc)) from exc


def write_brs(branch: BranchSet, path) -> None:
    lines = ["BRS 1"]
    for v, n in branch.entries:
        lines.append(f"B {v} {n}")
    try:
        with open(path, "w", newline="\n") as fh:
            fh.write("\n".join(lines) + "\n")
    except OSError as exc:
        raise IoFailure(str(exc)) from exc


def read_brs(path) -> BranchSet:
    entries = _read_tagged(path, "BRS 1", "B", 2, dense=False)
    try:
        return BranchSet(tuple((v, int(fields[0]))
                               for v, fields in sorted(entries.items())))
    except ValueError as exc:
        raise FormatError(str(exc)) from exc


def _read_tagged(path, header, tag, width, dense=True):
    with open(path) as fh:
        raw = fh.read().splitlines()
    lines = [ln.split("#", 1)[0].strip() for ln in raw]
    lines = [ln for ln in lines if ln]
    if not lines or lines[0].split() != header.split():
        raise FormatError(f"missing {header!r} header")
    entries: dict[int, list[str]] = {}
    for ln in lines[1:]:
        parts = ln.split()
        if parts[0] != tag or len(parts) != width + 1:
            raise FormatError(f"unrecognized line: {ln!r}")
        try:
            v = int(parts[1])
        except ValueError as exc:
            raise FormatError(f"bad vertex id in line: {ln!r}") from exc
        if v in entries:
            raise FormatError(f"duplicate entry for vertex {v}")
        entries[v] = parts[2:]
    if dense and entries and sorted(entries) != list(range(len(entries))):
        raise FormatError("vertex ids must form a dense range")
    return entries
