"""Planar realization of a labelled complex and SVG output.

Circles are placed by developing the complex face by face from a root
face: each new vertex goes to the unique point whose circle is tangent to
the two already-placed circles of the shared edge, on the side dictated by
the face orientation. Every vertex keeps the center from its first
placement; how badly later faces disagree is measured by
`consistency_error`.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .errors import IoFailure, MismatchedComplex, UnplacedFace
from .labels import Label, _radii_of
from .triangulation import TriangulationComplex


@dataclass(frozen=True)
class Packing:
    """A complex, a label, and one set of planar centers."""

    complex: TriangulationComplex
    label: Label
    centers: np.ndarray
    root_face: int
    root_origin: tuple[float, float]
    root_angle: float

    def center(self, v: int) -> np.ndarray:
        return self.centers[v]


def _third_vertex_placement(face, placed_u, placed_w):
    """Directed shared edge (u, w) of `face` such that the remaining vertex
    sits to the left of u -> w; returns (u, w, x)."""
    a, b, c = face
    if placed_u == a and placed_w == b:
        return a, b, c
    if placed_u == b and placed_w == c:
        return b, c, a
    if placed_u == c and placed_w == a:
        return c, a, b
    # Edge supplied in the opposite direction.
    if placed_u == b and placed_w == a:
        return a, b, c
    if placed_u == c and placed_w == b:
        return b, c, a
    if placed_u == a and placed_w == c:
        return c, a, b
    raise UnplacedFace(f"edge ({placed_u}, {placed_w}) not in face {face}")


def _tangent_point(A, ra, B, rb, rx):
    """Center of the circle of radius rx tangent to the circles at A and B,
    to the left of the directed segment A -> B."""
    dx = B[0] - A[0]
    dy = B[1] - A[1]
    d = math.hypot(dx, dy)
    r1 = ra + rx
    r2 = rb + rx
    along = (d * d + r1 * r1 - r2 * r2) / (2.0 * d)
    perp = math.sqrt(max(r1 * r1 - along * along, 0.0))
    ex, ey = dx / d, dy / d
    return (A[0] + along * ex - perp * ey, A[1] + along * ey + perp * ex)


def layout_packing(complex: TriangulationComplex, rho,
                   root_face: int = 0,
                   root_origin: tuple[float, float] = (0.0, 0.0),
                   root_angle: float = 0.0,
                   order_seed: int | None = None) -> Packing:
    """Develop centers over the face adjacency starting from `root_face`.

    The root face's first vertex lands on `root_origin` with its first edge
    at `root_angle`; an `order_seed` shuffles the breadth-first expansion
    order (placed positions must not depend on it for solved labels).
    """
    radii = _radii_of(rho)
    label = rho if isinstance(rho, Label) else Label(radii)
    faces = complex.faces
    if not 0 <= root_face < len(faces):
        raise UnplacedFace(f"root face {root_face} out of range")

    # Face adjacency across shared edges.
    by_edge: dict[tuple[int, int], list[int]] = {}
    for fi, (a, b, c) in enumerate(faces):
        for u, v in ((a, b), (b, c), (c, a)):
            key = (u, v) if u < v else (v, u)
            by_edge.setdefault(key, []).append(fi)
    adjacency: list[list[tuple[int, tuple[int, int]]]] = [[] for _ in faces]
    for edge, fs in by_edge.items():
        if len(fs) == 2:
            adjacency[fs[0]].append((fs[1], edge))
            adjacency[fs[1]].append((fs[0], edge))
    if order_seed is not None:
        rng = np.random.default_rng(order_seed)
        for lst in adjacency:
            rng.shuffle(lst)

    centers = np.full((complex.vertex_count, 2), np.nan)
    a, b, c = faces[root_face]
    ox, oy = root_origin
    centers[a] = (ox, oy)
    step = radii[a] + radii[b]
    centers[b] = (ox + step * math.cos(root_angle),
                  oy + step * math.sin(root_angle))
    centers[c] = _tangent_point(centers[a], radii[a], centers[b], radii[b],
                                radii[c])

    seen = [False] * len(faces)
    seen[root_face] = True
    queue = deque([root_face])
    placed_faces = 1
    while queue:
        fi = queue.popleft()
        for fj, (eu, ev) in adjacency[fi]:
            if seen[fj]:
                continue
            seen[fj] = True
            placed_faces += 1
            u, w, x = _third_vertex_placement(faces[fj], eu, ev)
            if np.isnan(centers[x][0]):
                centers[x] = _tangent_point(centers[u], radii[u],
                                            centers[w], radii[w], radii[x])
            queue.append(fj)
    if placed_faces != len(faces) or np.isnan(centers).any():
        raise UnplacedFace("development did not reach every face")

    return Packing(complex=complex, label=label, centers=centers,
                   root_face=root_face, root_origin=(float(ox), float(oy)),
                   root_angle=float(root_angle))


def consistency_error(packing: Packing) -> float:
    """Worst tangency violation over all edges:
    max | |center(u) - center(v)| - (rho(u) + rho(v)) |."""
    radii = packing.label.radii
    worst = 0.0
    for u, v in packing.complex.edges:
        d = float(np.hypot(*(packing.centers[u] - packing.centers[v])))
        worst = max(worst, abs(d - (radii[u] + radii[v])))
    return worst


def realized_angle(packing: Packing, v: int, face: Sequence[int]) -> float:
    """Angle at `v`'s center in the laid-out triangle of `face`."""
    u, w = (x for x in face if x != v)
    p = packing.centers[v]
    e1 = packing.centers[u] - p
    e2 = packing.centers[w] - p
    dot = float(e1 @ e2)
    cross = float(e1[0] * e2[1] - e1[1] * e2[0])
    return abs(math.atan2(cross, dot))


def total_turning(packing: Packing, v: int) -> float:
    """Sum of realized angles over all faces at an interior vertex; equals
    the angle sum (2*pi*(n+1) at an order-n branch vertex)."""
    faces = packing.complex.faces
    return sum(realized_angle(packing, v, faces[fi])
               for fi in packing.complex.faces_at_vertex[v])


@dataclass(frozen=True)
class RatioMap:
    """Per-vertex radius quotient between two labels on one complex."""

    values: np.ndarray

    def oscillation(self, vertices: Iterable[int] | None = None) -> float:
        """max/min of the ratio over a vertex subset (1.0 when constant)."""
        vals = self.values if vertices is None else self.values[list(vertices)]
        return float(np.max(vals) / np.min(vals))

    def __getitem__(self, v: int) -> float:
        return float(self.values[v])


def ratio_map(rho_domain, rho_range) -> RatioMap:
    """Ratio map of range radii over domain radii."""
    p = _radii_of(rho_domain)
    q = _radii_of(rho_range)
    if p.shape != q.shape:
        raise MismatchedComplex(
            f"labels have {len(p)} and {len(q)} vertices")
    return RatioMap(values=q / p)


# -- SVG output ---------------------------------------------------------------

SVG_CIRCLE_STROKE = "#1f77b4"
SVG_CIRCLE_FILL = "none"
SVG_CARRIER_STROKE = "#999999"
SVG_BRANCH_FILL = "#d62728"


@dataclass(frozen=True)
class SvgOptions:
    scale: float = 100.0
    stroke_width: float = 1.0
    carrier: bool = False
    branch_vertices: tuple[int, ...] = field(default=())
    branch_color: str = SVG_BRANCH_FILL
    branch_opacity: float = 0.4  # translucent so overlapping sheets show
    margin: float = 0.05


def svg_document(packing: Packing, options: SvgOptions = SvgOptions()) -> str:
    """Render the packing as an SVG 1.1 document string (deterministic)."""
    radii = packing.label.radii
    xs = packing.centers[:, 0]
    ys = packing.centers[:, 1]
    lo_x = float(np.min(xs - radii))
    hi_x = float(np.max(xs + radii))
    lo_y = float(np.min(ys - radii))
    hi_y = float(np.max(ys + radii))
    pad = max(hi_x - lo_x, hi_y - lo_y) * options.margin
    s = options.scale

    def tx(x: float) -> float:
        return (x - lo_x + pad) * s

    def ty(y: float) -> float:
        return (hi_y + pad - y) * s  # flip: SVG y grows downward

    width = (hi_x - lo_x + 2 * pad) * s
    height = (hi_y - lo_y + 2 * pad) * s
    lines = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
        f'width="{width:.2f}" height="{height:.2f}" '
        f'viewBox="0 0 {width:.2f} {height:.2f}">',
    ]
    branch = set(options.branch_vertices)
    if branch:
        marks = ", ".join(
            f"{v} (winding {round(total_turning(packing, v) / (2 * math.pi))})"
            for v in sorted(branch))
        lines.append(f"  <desc>branch vertices: {marks}</desc>")
    if options.carrier:
        for u, v in packing.complex.edges:
            lines.append(
                f'  <line x1="{tx(xs[u]):.4f}" y1="{ty(ys[u]):.4f}" '
                f'x2="{tx(xs[v]):.4f}" y2="{ty(ys[v]):.4f}" '
                f'stroke="{SVG_CARRIER_STROKE}" '
                f'stroke-width="{options.stroke_width:.2f}"/>')
    for v in range(packing.complex.vertex_count):
        if v in branch:
            paint = (f'fill="{options.branch_color}" '
                     f'fill-opacity="{options.branch_opacity:.2f}"')
        else:
            paint = f'fill="{SVG_CIRCLE_FILL}"'
        lines.append(
            f'  <circle cx="{tx(xs[v]):.4f}" cy="{ty(ys[v]):.4f}" '
            f'r="{radii[v] * s:.4f}" {paint} '
            f'stroke="{SVG_CIRCLE_STROKE}" '
            f'stroke-width="{options.stroke_width:.2f}"/>')
    lines.append("</svg>")
    return "\n".join(lines) + "\n"


def to_svg(packing: Packing, path, options: SvgOptions = SvgOptions()) -> None:
    """Write the SVG rendering to `path`."""
    try:
        with open(path, "w", newline="\n") as fh:
            fh.write(svg_document(packing, options))
    except OSError as exc:
        raise IoFailure(str(exc)) from exc
