"""Reversible random walks on the 1-skeleton.

Conductances come either from unit weights (simple walk) or from a label:
the weight of an edge is the sum over its one or two flanking triangles of

    sqrt(rv * rw * rf / (rv + rw + rf)) / (rv + rw),

which is symmetric in v, w and bounded by 2*sqrt(rv*rw)/(rv+rw) <= 1.
On top of the weights sit the transition kernel, Dirichlet solves for
effective resistance, and a seeded Monte Carlo return-probability
estimator.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Iterable, Mapping, Sequence

import numpy as np
import scipy.sparse
import scipy.sparse.linalg

from . import _kernels
from .errors import (
    EdgeSetMismatch,
    IsolatedVertex,
    MissingValues,
    SingularSystem,
)
from .labels import _radii_of
from .triangulation import TriangulationComplex, hex_ball

DIRECT_SOLVE_LIMIT = 2000
LINEAR_RESIDUAL = 1e-10


class ConductanceNetwork:
    """Symmetric positive edge conductances on a finite graph.

    Parallel entries for the same vertex pair are summed. Vertices may be
    isolated (no edges); rows for them only become an error when a
    transition kernel is requested.
    """

    def __init__(self, vertex_count: int,
                 weighted_edges: Iterable[tuple[int, int, float]]):
        merged: dict[tuple[int, int], float] = {}
        for u, v, c in weighted_edges:
            u, v = int(u), int(v)
            c = float(c)
            if not 0 <= u < vertex_count or not 0 <= v < vertex_count or u == v:
                raise ValueError(f"bad edge ({u}, {v})")
            if not (math.isfinite(c) and c > 0.0):
                raise ValueError(f"conductance on ({u}, {v}) must be positive")
            key = (u, v) if u < v else (v, u)
            merged[key] = merged.get(key, 0.0) + c
        self.vertex_count = int(vertex_count)
        self.edges = tuple(sorted(merged))
        self.conductances = np.array([merged[e] for e in self.edges])
        self.conductances.setflags(write=False)
        self._edge_index = {e: i for i, e in enumerate(self.edges)}

        counts = np.zeros(vertex_count, dtype=np.int32)
        for u, v in self.edges:
            counts[u] += 1
            counts[v] += 1
        indptr = np.zeros(vertex_count + 1, dtype=np.int32)
        np.cumsum(counts, out=indptr[1:])
        indices = np.zeros(len(self.edges) * 2, dtype=np.int32)
        weights = np.zeros(len(self.edges) * 2)
        cursor = indptr[:-1].copy()
        for (u, v), c in zip(self.edges, self.conductances):
            indices[cursor[u]] = v
            weights[cursor[u]] = c
            cursor[u] += 1
            indices[cursor[v]] = u
            weights[cursor[v]] = c
            cursor[v] += 1
        self.indptr = indptr
        self.indices = indices
        self.weights = weights
        self.totals = np.zeros(vertex_count)
        for row in range(vertex_count):
            self.totals[row] = weights[indptr[row]:indptr[row + 1]].sum()
        for arr in (self.indptr, self.indices, self.weights, self.totals):
            arr.setflags(write=False)

    def conductance(self, u: int, v: int) -> float:
        key = (u, v) if u < v else (v, u)
        i = self._edge_index.get(key)
        return 0.0 if i is None else float(self.conductances[i])

    def total(self, v: int) -> float:
        return float(self.totals[v])

    def neighbors(self, v: int) -> np.ndarray:
        return self.indices[self.indptr[v]:self.indptr[v + 1]]

    def scaled(self, factor: float) -> "ConductanceNetwork":
        return ConductanceNetwork(
            self.vertex_count,
            ((u, v, c * factor) for (u, v), c in
             zip(self.edges, self.conductances)))

    def __repr__(self):
        return (f"ConductanceNetwork(V={self.vertex_count}, "
                f"E={len(self.edges)})")


def simple_network(complex: TriangulationComplex) -> ConductanceNetwork:
    """Unit conductance on every edge (the simple random walk)."""
    return ConductanceNetwork(complex.vertex_count,
                              ((u, v, 1.0) for u, v in complex.edges))


def label_conductances(complex: TriangulationComplex,
                       rho) -> ConductanceNetwork:
    """Edge conductances derived from a label (one square-root term per
    flanking triangle; boundary edges have a single term)."""
    radii = _radii_of(rho)
    flanks: dict[tuple[int, int], list[int]] = {}
    for a, b, c in complex.faces:
        for u, v, f in ((a, b, c), (b, c, a), (c, a, b)):
            key = (u, v) if u < v else (v, u)
            flanks.setdefault(key, []).append(f)

    def weight(u: int, v: int) -> float:
        ru, rv = radii[u], radii[v]
        total = 0.0
        for f in flanks[(u, v)]:
            rf = radii[f]
            total += math.sqrt(ru * rv * rf / (ru + rv + rf))
        return total / (ru + rv)

    return ConductanceNetwork(complex.vertex_count,
                              ((u, v, weight(u, v)) for u, v in complex.edges))


@dataclass(frozen=True)
class TransitionKernel:
    """Row-stochastic neighbor-step probabilities in CSR layout."""

    vertex_count: int
    indptr: np.ndarray
    indices: np.ndarray
    probs: np.ndarray
    cum: np.ndarray

    def prob(self, v: int, w: int) -> float:
        row = slice(self.indptr[v], self.indptr[v + 1])
        hits = np.flatnonzero(self.indices[row] == w)
        if hits.size == 0:
            return 0.0
        return float(self.probs[row][hits[0]])

    def neighbors(self, v: int) -> np.ndarray:
        return self.indices[self.indptr[v]:self.indptr[v + 1]]

    def dense(self) -> np.ndarray:
        out = np.zeros((self.vertex_count, self.vertex_count))
        for v in range(self.vertex_count):
            row = slice(self.indptr[v], self.indptr[v + 1])
            out[v, self.indices[row]] = self.probs[row]
        return out


def transition_kernel(net: ConductanceNetwork) -> TransitionKernel:
    """p(v, w) = c(v, w) / c(v); raises IsolatedVertex on empty rows."""
    lonely = np.flatnonzero(net.indptr[1:] == net.indptr[:-1])
    if lonely.size:
        raise IsolatedVertex(f"vertex {int(lonely[0])} has no edges")
    probs = np.empty_like(net.weights)
    cum = np.empty_like(net.weights)
    for v in range(net.vertex_count):
        row = slice(net.indptr[v], net.indptr[v + 1])
        probs[row] = net.weights[row] / net.totals[v]
        cum[row] = np.cumsum(probs[row])
        cum[net.indptr[v + 1] - 1] = 1.0
    probs.setflags(write=False)
    cum.setflags(write=False)
    return TransitionKernel(vertex_count=net.vertex_count, indptr=net.indptr,
                            indices=net.indices, probs=probs, cum=cum)


def superharmonic_residual(kernel: TransitionKernel, f,
                           region: Iterable[int] | None = None
                           ) -> dict[int, float]:
    """Per-vertex residual sum_w p(v, w) f(w) - f(v); a function is
    superharmonic on the region iff every residual is <= 0."""
    if region is None:
        region = range(kernel.vertex_count)
    values: dict[int, float] = {}
    if isinstance(f, Mapping):
        values = {int(v): float(x) for v, x in f.items()}
    else:
        arr = np.asarray(f, dtype=np.float64)
        values = {v: float(arr[v]) for v in range(len(arr))}
    out: dict[int, float] = {}
    for v in region:
        if v not in values:
            raise MissingValues(f"no value at vertex {v}")
        acc = 0.0
        for k in range(kernel.indptr[v], kernel.indptr[v + 1]):
            w = int(kernel.indices[k])
            if w not in values:
                raise MissingValues(f"no value at neighbor {w} of {v}")
            acc += float(kernel.probs[k]) * values[w]
        out[v] = acc - values[v]
    return out


def _component_of(net: ConductanceNetwork, root: int) -> set[int]:
    seen = {root}
    stack = [root]
    while stack:
        u = stack.pop()
        for w in net.neighbors(u):
            w = int(w)
            if w not in seen:
                seen.add(w)
                stack.append(w)
    return seen


def effective_resistance(net: ConductanceNetwork, root: int,
                         boundary_set: Iterable[int]) -> float:
    """Resistance between `root` and the contracted `boundary_set`.

    Solves the Dirichlet problem h(root) = 1, h = 0 on the boundary set,
    weighted-harmonic elsewhere, and returns 1 over the current leaving
    the root.
    """
    boundary = {int(v) for v in boundary_set}
    if not boundary:
        raise ValueError("boundary set must be nonempty")
    if root in boundary:
        raise ValueError("root must not belong to the boundary set")
    component = _component_of(net, root)
    if not (boundary & component):
        raise SingularSystem("root is not connected to the boundary set")

    unknowns = sorted(component - boundary - {root})
    h = np.zeros(net.vertex_count)
    h[root] = 1.0
    if unknowns:
        pos = {v: i for i, v in enumerate(unknowns)}
        rows, cols, vals = [], [], []
        rhs = np.zeros(len(unknowns))
        for v in unknowns:
            i = pos[v]
            rows.append(i)
            cols.append(i)
            vals.append(net.totals[v])
            for k in range(net.indptr[v], net.indptr[v + 1]):
                w = int(net.indices[k])
                c = float(net.weights[k])
                if w == root:
                    rhs[i] += c
                elif w in pos:
                    rows.append(i)
                    cols.append(pos[w])
                    vals.append(-c)
        A = scipy.sparse.csr_matrix(
            (vals, (rows, cols)), shape=(len(unknowns), len(unknowns)))
        if len(unknowns) < DIRECT_SOLVE_LIMIT:
            x = scipy.sparse.linalg.spsolve(A, rhs)
        else:
            x, info = scipy.sparse.linalg.cg(A, rhs, rtol=1e-14, atol=0.0)
            if info != 0 or np.linalg.norm(A @ x - rhs) > LINEAR_RESIDUAL:
                x = scipy.sparse.linalg.spsolve(A.tocsc(), rhs)
        h[unknowns] = x

    current = 0.0
    for k in range(net.indptr[root], net.indptr[root + 1]):
        current += float(net.weights[k]) * (1.0 - float(h[int(net.indices[k])]))
    if current <= 0.0:
        raise SingularSystem("no current leaves the root")
    return 1.0 / current


@dataclass(frozen=True)
class ResistanceProfile:
    """Effective resistance from the center across growing hex balls."""

    levels: tuple[int, ...]
    resistances: tuple[float, ...]

    def rows(self):
        return zip(self.levels, self.resistances)


def recurrence_profile(ball_max: int,
                       net_builder: Callable[[TriangulationComplex],
                                             ConductanceNetwork]
                       = simple_network) -> ResistanceProfile:
    """Resistance center-to-boundary of hex_ball(k) for k = 1..ball_max.

    A growing, plateau-free profile is the finite shadow of recurrence;
    this reports the trend and never certifies a type.
    """
    if ball_max < 1:
        raise ValueError("ball_max must be >= 1")
    levels = []
    values = []
    for k in range(1, ball_max + 1):
        ball = hex_ball(k)
        net = net_builder(ball)
        levels.append(k)
        values.append(effective_resistance(net, 0, ball.boundary_vertices))
    return ResistanceProfile(levels=tuple(levels), resistances=tuple(values))


@dataclass(frozen=True)
class ConductanceComparison:
    """Pointwise domination report plus resistance spot checks."""

    dominated: bool          # every c2(e) <= c1(e)
    checks: tuple[tuple[float, float], ...]  # (R1, R2) per tested pair
    resistance_monotone: bool | None

    @property
    def holds(self) -> bool:
        return self.dominated and (self.resistance_monotone is not False)


def compare_conductances(net1: ConductanceNetwork, net2: ConductanceNetwork,
                         test_pairs: Sequence[tuple[int, Iterable[int]]] = (),
                         tol: float = 1e-12) -> ConductanceComparison:
    """Check c2 <= c1 pointwise; on every supplied (root, boundary) pair,
    a dominated net2 must show no smaller resistance than net1."""
    if net1.vertex_count != net2.vertex_count or net1.edges != net2.edges:
        raise EdgeSetMismatch("networks must share one edge set")
    dominated = bool(np.all(net2.conductances <= net1.conductances + tol))
    checks = []
    monotone: bool | None = None
    for root, boundary in test_pairs:
        boundary = tuple(boundary)
        r1 = effective_resistance(net1, root, boundary)
        r2 = effective_resistance(net2, root, boundary)
        checks.append((r1, r2))
    if dominated and checks:
        monotone = all(r2 >= r1 - tol * max(1.0, r1) for r1, r2 in checks)
    return ConductanceComparison(dominated=dominated, checks=tuple(checks),
                                 resistance_monotone=monotone)


@dataclass(frozen=True)
class ReturnEstimate:
    """Monte Carlo return-probability estimate with binomial error bar."""

    trials: int
    hits: int
    estimate: float
    stderr: float


def monte_carlo_return(kernel: TransitionKernel, root: int, max_steps: int,
                       trials: int, seed: int,
                       threads: int = 1) -> ReturnEstimate:
    """Fraction of seeded walks from `root` that revisit it within
    `max_steps` steps. Per-trial substreams depend only on (seed, trial),
    so the result is identical for any `threads` value."""
    if trials < 1:
        raise ValueError("trials must be >= 1")
    seed = int(seed) & ((1 << 64) - 1)
    if threads <= 1:
        hits = _kernels.mc_return_hits(kernel.indptr, kernel.indices,
                                       kernel.cum, root, max_steps, 0, trials,
                                       seed)
    else:
        chunk = (trials + threads - 1) // threads
        ranges = [(start, min(chunk, trials - start))
                  for start in range(0, trials, chunk)]
        with ThreadPoolExecutor(max_workers=threads) as pool:
            parts = pool.map(
                lambda se: _kernels.mc_return_hits(
                    kernel.indptr, kernel.indices, kernel.cum, root,
                    max_steps, se[0], se[1], seed), ranges)
            hits = sum(parts)
    p = hits / trials
    return ReturnEstimate(trials=trials, hits=int(hits), estimate=p,
                          stderr=math.sqrt(p * (1.0 - p) / trials))
