"""Variational machinery: one-parameter label families, the closed-form
derivative of a flower's angle sum, and harmonicity of the logarithmic
velocity field.

For a star with hub radius r0 and petal radii r1..rm, the derivative of
the hub angle sum along a smooth family collapses to

    sum_i  c_i * (ri'/ri - r0'/r0),

where c_i is exactly the label conductance of the hub-petal edge. On a
general complex the per-vertex log-velocity f = rho'/rho of an
angle-sum-preserving family is therefore conductance-harmonic away from
the pinned vertex; `flow_field_residual` measures that.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .errors import HypothesisNotMet, IoFailure, NotAStar, StepTooLarge
from .labels import (
    Label,
    TargetAngles,
    _radii_of,
    angle_sum,
    angle_sums,
    solve_boundary_value,
)
from .network import ConductanceNetwork, label_conductances
from .triangulation import TriangulationComplex, neighbors_cyclic


@dataclass(frozen=True)
class LabelFamily:
    """Per-vertex radius paths rho_v(t) sampled on a grid in [0, 1]."""

    complex: TriangulationComplex
    t_grid: np.ndarray
    radii: np.ndarray                 # shape (len(t_grid), vertex_count)
    kind: str                         # "explicit" | "boundary-interpolated"
    fixed_vertex: int | None = None
    rho_fn: Callable[[float], np.ndarray] | None = None

    @classmethod
    def from_function(cls, complex: TriangulationComplex,
                      rho_fn: Callable[[float], np.ndarray],
                      t_grid: Sequence[float] | None = None) -> "LabelFamily":
        grid = np.asarray(t_grid if t_grid is not None
                          else np.linspace(0.0, 1.0, 33), dtype=np.float64)
        rows = np.vstack([np.asarray(rho_fn(float(t)), dtype=np.float64)
                          for t in grid])
        return cls(complex=complex, t_grid=grid, radii=rows, kind="explicit",
                   rho_fn=rho_fn)

    def label_at(self, index: int) -> Label:
        return Label(self.radii[index])

    def radii_at(self, t: float) -> np.ndarray:
        """Radii at parameter t, via the analytic path when available."""
        if self.rho_fn is not None:
            return np.asarray(self.rho_fn(float(t)), dtype=np.float64)
        hits = np.flatnonzero(np.abs(self.t_grid - t) <= 1e-12)
        if hits.size == 0:
            raise ValueError(f"t={t} is not on the family grid and the "
                             "family has no analytic path")
        return self.radii[int(hits[0])]

    def log_velocity(self, index: int) -> np.ndarray:
        """Central-difference estimate of rho'/rho at an interior grid index."""
        if not 0 < index < len(self.t_grid) - 1:
            raise ValueError("log_velocity needs an interior grid index")
        dt = float(self.t_grid[index + 1] - self.t_grid[index - 1])
        drho = (self.radii[index + 1] - self.radii[index - 1]) / dt
        return drho / self.radii[index]


def _star_petals(complex: TriangulationComplex) -> tuple[int, ...]:
    if complex.interior_vertices != (0,):
        raise NotAStar("expected exactly one interior vertex, the hub 0")
    if any(0 not in f for f in complex.faces):
        raise NotAStar("every face of a star contains the hub")
    return neighbors_cyclic(complex, 0)


def angle_sum_derivative_coefficients(star_complex: TriangulationComplex,
                                      rho) -> np.ndarray:
    """Per-petal coefficient of (ri'/ri - r0'/r0) in the closed-form hub
    angle-sum derivative; equals the hub-petal label conductance."""
    radii = _radii_of(rho)
    petals = _star_petals(star_complex)
    m = len(petals)
    r0 = radii[0]
    out = np.empty(m)
    for i, p in enumerate(petals):
        ri = radii[p]
        prev = radii[petals[(i - 1) % m]]
        nxt = radii[petals[(i + 1) % m]]
        out[i] = (math.sqrt(r0 * ri * prev / (r0 + ri + prev))
                  + math.sqrt(r0 * ri * nxt / (r0 + ri + nxt))) / (r0 + ri)
    return out


def angle_sum_derivative(star_complex: TriangulationComplex, rho,
                         rho_prime) -> float:
    """Closed-form d/dt of the hub angle sum for radius velocities
    `rho_prime` (indexed like the label)."""
    radii = _radii_of(rho)
    vel = np.asarray(rho_prime, dtype=np.float64)
    petals = _star_petals(star_complex)
    coeffs = angle_sum_derivative_coefficients(star_complex, radii)
    hub_rate = vel[0] / radii[0]
    total = 0.0
    for c, p in zip(coeffs, petals):
        total += c * (vel[p] / radii[p] - hub_rate)
    return float(total)


def angle_sum_derivative_fd(family: LabelFamily, t: float, h: float,
                            vertex: int = 0) -> float:
    """Central difference (theta(t+h) - theta(t-h)) / 2h of the angle sum
    at `vertex` (default: the hub)."""
    hi = family.radii_at(t + h)
    lo = family.radii_at(t - h)
    if np.any(hi <= 0.0) or np.any(lo <= 0.0):
        raise StepTooLarge(f"step h={h} leaves the positive-radius domain")
    theta_hi = angle_sum(family.complex, hi, vertex)
    theta_lo = angle_sum(family.complex, lo, vertex)
    return (theta_hi - theta_lo) / (2.0 * h)


def perturbation_family(complex: TriangulationComplex, rho: Label,
                        rho_hat: Label, w0: int,
                        t_grid: Sequence[float] | None = None,
                        tol: float = 1e-12,
                        max_iter: int = 100_000) -> LabelFamily:
    """Family of labels interpolating the boundary from rho to rho_hat with
    `w0` pinned at rho(w0) and all other interior angle sums frozen at
    their rho values. Endpoints reproduce rho (t=0) and the pinned solve
    with the hatted boundary (t=1)."""
    complex._check_vertex(w0)
    if complex.boundary[w0]:
        raise HypothesisNotMet(f"pinned vertex {w0} must be interior")
    r = _radii_of(rho)
    rh = _radii_of(rho_hat)
    if np.any(rh < r - 1e-12):
        raise HypothesisNotMet("rho_hat must dominate rho pointwise")
    sums = angle_sums(complex, r)
    sums_hat = angle_sums(complex, rh)
    if np.any(sums_hat < sums - 1e-9):
        raise HypothesisNotMet(
            "angle sums of rho_hat must dominate those of rho")

    grid = np.asarray(t_grid if t_grid is not None
                      else np.linspace(0.0, 1.0, 33), dtype=np.float64)
    interior = complex.interior_vertices
    targets = TargetAngles({v: float(s) for v, s in zip(interior, sums)})
    bverts = list(complex.boundary_vertices)
    rows = np.empty((len(grid), complex.vertex_count))
    warm: Label | None = Label(r.copy())
    for i, t in enumerate(grid):
        boundary = {v: (1.0 - t) * r[v] + t * rh[v] for v in bverts}
        solved, _ = solve_boundary_value(complex, targets, boundary, tol=tol,
                                         max_iter=max_iter,
                                         fixed={w0: float(r[w0])},
                                         initial=warm)
        rows[i] = solved.radii
        warm = solved
    return LabelFamily(complex=complex, t_grid=grid, radii=rows,
                       kind="boundary-interpolated", fixed_vertex=w0)


def write_family_csv(family: LabelFamily, path) -> None:
    """Dump the family as CSV rows t,vertex,radius."""
    lines = ["t,vertex,radius"]
    for t, row in zip(family.t_grid, family.radii):
        lines += [f"{float(t)!r},{v},{float(r)!r}" for v, r in enumerate(row)]
    try:
        with open(path, "w", newline="\n") as fh:
            fh.write("\n".join(lines) + "\n")
    except OSError as exc:
        raise IoFailure(str(exc)) from exc


def write_residual_csv(residuals: dict[int, float], path) -> None:
    """Dump per-vertex harmonicity residuals as CSV rows vertex,residual."""
    lines = ["vertex,residual"]
    lines += [f"{v},{float(r)!r}" for v, r in sorted(residuals.items())]
    try:
        with open(path, "w", newline="\n") as fh:
            fh.write("\n".join(lines) + "\n")
    except OSError as exc:
        raise IoFailure(str(exc)) from exc


@dataclass(frozen=True)
class FlowField:
    """Log-velocity field rho'/rho of a family at one grid point."""

    values: np.ndarray
    fixed_vertex: int | None


def flow_field_residual(family: LabelFamily, index: int,
                        net_builder: Callable[[TriangulationComplex, Label],
                                              ConductanceNetwork]
                        = label_conductances
                        ) -> tuple[FlowField, dict[int, float]]:
    """Conductance-weighted harmonicity defect of the log-velocity field.

    Returns the field f and, per interior vertex, sum_w c(v,w)(f(w)-f(v)).
    For an angle-sum-preserving family this is ~0 away from the pinned
    vertex and >= 0 at it (up to finite-difference error).
    """
    f = family.log_velocity(index)
    net = net_builder(family.complex, family.label_at(index))
    residuals: dict[int, float] = {}
    for v in family.complex.interior_vertices:
        acc = 0.0
        for k in range(net.indptr[v], net.indptr[v + 1]):
            w = int(net.indices[k])
            acc += float(net.weights[k]) * (f[w] - f[v])
        residuals[v] = acc
    return FlowField(values=f, fixed_vertex=family.fixed_vertex), residuals
