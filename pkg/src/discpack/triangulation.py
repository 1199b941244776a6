"""Oriented triangulations of a disc.

A complex is built from positively oriented vertex triples and validated:
every interior edge lies in exactly two faces, every boundary edge in one,
vertex links are single cycles (interior) or single paths (boundary), the
complex is connected, and the Euler characteristic V - E + F equals 1.

Faces are stored canonically (smallest vertex first, lexicographically
sorted), so two complexes over the same face set compare equal regardless
of input order. Instances are immutable after construction.
"""

from __future__ import annotations

from typing import Iterable, Sequence

import numpy as np

from .errors import (
    DanglingVertex,
    Disconnected,
    FormatError,
    InvalidDegree,
    InvalidFace,
    IoFailure,
    NonManifoldEdge,
    NotADisc,
    OrientationConflict,
    UnknownVertex,
)

Face = tuple[int, int, int]


def _canonical(face: Sequence[int]) -> Face:
    """Rotate a triple so its smallest vertex comes first (orientation kept)."""
    a, b, c = face
    m = min(a, b, c)
    if a == m:
        return (a, b, c)
    if b == m:
        return (b, c, a)
    return (c, a, b)


class TriangulationComplex:
    """Validated oriented triangulation of a disc.

    Use :func:`build_complex` or a generator (:func:`star`,
    :func:`hex_ball`) instead of calling this directly.
    """

    def __init__(self, vertex_count: int, faces: tuple[Face, ...],
                 boundary: np.ndarray, links: tuple[tuple[int, ...], ...]):
        self.vertex_count = vertex_count
        self.faces = faces
        self.boundary = boundary
        self.links = links
        boundary.setflags(write=False)

        self.interior_vertices = tuple(
            int(v) for v in range(vertex_count) if not boundary[v]
        )
        self.boundary_vertices = tuple(
            int(v) for v in range(vertex_count) if boundary[v]
        )

        edges: set[tuple[int, int]] = set()
        for a, b, c in faces:
            edges.add((a, b) if a < b else (b, a))
            edges.add((b, c) if b < c else (c, b))
            edges.add((a, c) if a < c else (c, a))
        self.edges = tuple(sorted(edges))

        faces_at: list[list[int]] = [[] for _ in range(vertex_count)]
        for fi, f in enumerate(faces):
            for v in f:
                faces_at[v].append(fi)
        self.faces_at_vertex = tuple(tuple(fs) for fs in faces_at)

        # Fan pairs: for each vertex, the two opposite corners of every
        # incident face, flattened CSR-style for the solver kernels.
        pa: list[int] = []
        pb: list[int] = []
        offsets = np.zeros(vertex_count + 1, dtype=np.int32)
        for v in range(vertex_count):
            for fi in faces_at[v]:
                a, b, c = faces[fi]
                if v == a:
                    pa.append(b)
                    pb.append(c)
                elif v == b:
                    pa.append(c)
                    pb.append(a)
                else:
                    pa.append(a)
                    pb.append(b)
            offsets[v + 1] = len(pa)
        self.fan_a = np.asarray(pa, dtype=np.int32)
        self.fan_b = np.asarray(pb, dtype=np.int32)
        self.fan_offsets = offsets
        self.fan_a.setflags(write=False)
        self.fan_b.setflags(write=False)
        self.fan_offsets.setflags(write=False)

    # -- basic queries -----------------------------------------------------

    @property
    def face_count(self) -> int:
        return len(self.faces)

    @property
    def edge_count(self) -> int:
        return len(self.edges)

    def is_boundary(self, v: int) -> bool:
        self._check_vertex(v)
        return bool(self.boundary[v])

    def degree(self, v: int) -> int:
        self._check_vertex(v)
        return len(self.links[v])

    def face_containing(self, v: int) -> tuple[int, ...]:
        self._check_vertex(v)
        return self.faces_at_vertex[v]

    def _check_vertex(self, v: int) -> None:
        if not 0 <= v < self.vertex_count:
            raise UnknownVertex(f"vertex {v} not in [0, {self.vertex_count})")

    def __eq__(self, other) -> bool:
        return (isinstance(other, TriangulationComplex)
                and self.vertex_count == other.vertex_count
                and self.faces == other.faces)

    def __hash__(self):
        return hash((self.vertex_count, self.faces))

    def __repr__(self) -> str:
        return (f"TriangulationComplex(V={self.vertex_count}, "
                f"E={self.edge_count}, F={self.face_count})")


def build_complex(faces: Iterable[Sequence[int]]) -> TriangulationComplex:
    """Validate oriented faces and assemble a disc triangulation.

    Raises NonManifoldEdge, OrientationConflict, Disconnected, NotADisc,
    DanglingVertex, or InvalidFace when the input is not a consistently
    oriented triangulation of a disc with dense vertex ids.
    """
    face_list = [tuple(int(v) for v in f) for f in faces]
    if not face_list:
        raise InvalidFace("need at least one face")
    for f in face_list:
        if len(f) != 3 or len(set(f)) != 3 or min(f) < 0:
            raise InvalidFace(f"not an oriented triple of distinct vertices: {f}")

    canonical = sorted({_canonical(f) for f in face_list})
    if len(canonical) != len(face_list):
        raise InvalidFace("duplicate face (same triple up to rotation)")

    vertex_count = max(max(f) for f in canonical) + 1
    seen = np.zeros(vertex_count, dtype=bool)
    for f in canonical:
        seen[list(f)] = True
    missing = np.flatnonzero(~seen)
    if missing.size:
        raise DanglingVertex(f"vertex {int(missing[0])} belongs to no face")

    # Undirected edge multiplicity first (a 3-face edge must be reported as
    # non-manifold, not as the orientation conflict it also implies).
    undirected: dict[tuple[int, int], int] = {}
    for a, b, c in canonical:
        for u, v in ((a, b), (b, c), (c, a)):
            key = (u, v) if u < v else (v, u)
            undirected[key] = undirected.get(key, 0) + 1
            if undirected[key] > 2:
                raise NonManifoldEdge(f"edge {key} lies in more than two faces")
    directed: set[tuple[int, int]] = set()
    for a, b, c in canonical:
        for u, v in ((a, b), (b, c), (c, a)):
            if (u, v) in directed:
                raise OrientationConflict(
                    f"edge ({u}, {v}) traversed twice in the same direction")
            directed.add((u, v))

    boundary_edges = {e for e, n in undirected.items() if n == 1}

    # Vertex links from the face orientation: in face (v, x, y) the corner
    # at v contributes the successor step x -> y of the link walk.
    links: list[tuple[int, ...]] = []
    boundary = np.zeros(vertex_count, dtype=bool)
    succ_all: list[dict[int, int]] = [dict() for _ in range(vertex_count)]
    for a, b, c in canonical:
        for v, x, y in ((a, b, c), (b, c, a), (c, a, b)):
            succ_all[v][x] = y
    for v in range(vertex_count):
        succ = succ_all[v]
        starts = [x for x in succ if x not in succ.values()]
        if not starts:  # closed link: interior vertex
            first = min(succ)
            cycle = [first]
            w = succ[first]
            while w != first:
                cycle.append(w)
                w = succ[w]
            if len(cycle) != len(succ):
                raise NotADisc(f"link of vertex {v} is not a single cycle")
            links.append(tuple(cycle))
        else:
            if len(starts) != 1:
                raise NotADisc(f"link of vertex {v} is not a single path")
            path = [starts[0]]
            while path[-1] in succ:
                path.append(succ[path[-1]])
            if len(path) != len(succ) + 1:
                raise NotADisc(f"link of vertex {v} is not a single path")
            boundary[v] = True
            links.append(tuple(path))

    # Boundary classification must agree with boundary-edge incidence.
    for (u, v) in boundary_edges:
        if not (boundary[u] and boundary[v]):
            raise NotADisc("boundary edge with an interior endpoint")

    # Connectivity over the 1-skeleton.
    adj: list[list[int]] = [[] for _ in range(vertex_count)]
    for (u, v) in undirected:
        adj[u].append(v)
        adj[v].append(u)
    reached = np.zeros(vertex_count, dtype=bool)
    stack = [0]
    reached[0] = True
    while stack:
        u = stack.pop()
        for w in adj[u]:
            if not reached[w]:
                reached[w] = True
                stack.append(w)
    if not reached.all():
        raise Disconnected("complex is not connected")

    euler = vertex_count - len(undirected) + len(canonical)
    if euler != 1:
        raise NotADisc(f"Euler characteristic {euler} != 1")
    if not boundary.any():
        raise NotADisc("a finite disc triangulation must have boundary")

    return TriangulationComplex(vertex_count, tuple(canonical), boundary,
                                tuple(links))


def neighbors_cyclic(complex: TriangulationComplex, v: int) -> tuple[int, ...]:
    """Neighbors of `v` in positive cyclic order.

    A cycle (canonical start: smallest neighbor id) for interior vertices,
    the full boundary-to-boundary path for boundary vertices.
    """
    complex._check_vertex(v)
    link = complex.links[v]
    if complex.boundary[v]:
        return link
    k = link.index(min(link))
    return link[k:] + link[:k]


def star(m: int) -> TriangulationComplex:
    """Star complex: interior hub 0 with petals 1..m in cyclic order."""
    if m < 3:
        raise InvalidDegree(f"star needs at least 3 petals, got {m}")
    faces = [(0, i, i % m + 1) for i in range(1, m + 1)]
    return build_complex(faces)


# Axial-coordinate neighbor directions of the triangular lattice, listed
# counterclockwise for the planar embedding x = q + r/2, y = r*sqrt(3)/2.
_HEX_DIRS = ((1, 0), (0, 1), (-1, 1), (-1, 0), (0, -1), (1, -1))


def _hex_rings(n: int) -> list[tuple[int, int]]:
    """Lattice points of the radius-n ball, center first, ring by ring.

    Ring k starts at (k, 0) and walks counterclockwise; this numbering is
    stable, so smaller balls are prefixes of larger ones.
    """
    points = [(0, 0)]
    for k in range(1, n + 1):
        q, r = k, 0
        for side in range(6):
            dq, dr = _HEX_DIRS[(side + 2) % 6]
            for _ in range(k):
                points.append((q, r))
                q, r = q + dq, r + dr
    return points


def hex_ball(n: int) -> TriangulationComplex:
    """Combinatorial ball of radius n in the hexagonal lattice.

    V = 1 + 3n(n+1) and F = 6n^2; hex_ball(1) equals star(6). Vertex ids
    grow ring by ring, so hex_ball(n)'s faces are a subset of
    hex_ball(n+1)'s.
    """
    if n < 1:
        raise InvalidDegree(f"hex ball radius must be >= 1, got {n}")
    points = _hex_rings(n)
    index = {p: i for i, p in enumerate(points)}
    faces = set()
    for (q, r) in points:
        for i in range(6):
            d1, d2 = _HEX_DIRS[i], _HEX_DIRS[(i + 1) % 6]
            u = (q + d1[0], r + d1[1])
            w = (q + d2[0], r + d2[1])
            if u in index and w in index:
                faces.add(_canonical((index[(q, r)], index[u], index[w])))
    return build_complex(sorted(faces))


def hex_ball_vertex_count(n: int) -> int:
    return 1 + 3 * n * (n + 1)


# -- .cpx text format --------------------------------------------------------

def write_cpx(complex: TriangulationComplex, path) -> None:
    """Write the `.cpx` text form: V lines with boundary flags, F lines."""
    lines = ["CPX 1"]
    for v in range(complex.vertex_count):
        lines.append(f"V {v} {1 if complex.boundary[v] else 0}")
    for a, b, c in complex.faces:
        lines.append(f"F {a} {b} {c}")
    try:
        with open(path, "w", newline="\n") as fh:
            fh.write("\n".join(lines) + "\n")
    except OSError as exc:
        raise IoFailure(str(exc)) from exc


def read_cpx(path) -> TriangulationComplex:
    """Parse a `.cpx` file, rebuild, and check the declared boundary flags."""
    with open(path) as fh:
        raw = fh.read().splitlines()
    lines = [ln.split("#", 1)[0].strip() for ln in raw]
    lines = [ln for ln in lines if ln]
    if not lines or lines[0].split() != ["CPX", "1"]:
        raise FormatError("missing 'CPX 1' header")
    declared: dict[int, int] = {}
    faces: list[tuple[int, int, int]] = []
    for ln in lines[1:]:
        parts = ln.split()
        try:
            if parts[0] == "V" and len(parts) == 3:
                declared[int(parts[1])] = int(parts[2])
            elif parts[0] == "F" and len(parts) == 4:
                faces.append((int(parts[1]), int(parts[2]), int(parts[3])))
            else:
                raise FormatError(f"unrecognized line: {ln!r}")
        except ValueError as exc:
            raise FormatError(f"bad integer in line: {ln!r}") from exc
    complex = build_complex(faces)
    for v, flag in declared.items():
        if v >= complex.vertex_count or flag not in (0, 1):
            raise FormatError(f"bad vertex declaration: V {v} {flag}")
        if bool(flag) != bool(complex.boundary[v]):
            raise FormatError(f"declared boundary flag of vertex {v} "
                              "contradicts the face set")
    if declared and len(declared) != complex.vertex_count:
        raise FormatError("vertex declarations do not cover the complex")
    return complex
