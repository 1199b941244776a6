#!/usr/bin/env python3
"""Benchmark the compiled kernels against the pure-Python fallback.

Runs the boundary-value relaxation, batched angle sums, and the Monte
Carlo walk on identical inputs through every importable backend and
prints per-kernel timings with speedups.

    python benchmarks/bench_kernels.py [--ball 8] [--trials 20000]
"""

import argparse
import math
import time

import numpy as np

from discpack import hex_ball, simple_network, transition_kernel
from discpack._kernels import available_backends


def time_call(fn, repeats=3):
    best = math.inf
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def bench_relax(backend, K, profile):
    order = np.asarray(K.interior_vertices, dtype=np.int32)
    targets = np.full(K.vertex_count, 2 * math.pi)

    def run():
        radii = np.ones(K.vertex_count)
        radii[list(K.boundary_vertices)] = profile
        sweeps, res, ok = backend.relax(radii, targets, K.fan_a, K.fan_b,
                                        K.fan_offsets, order, 1e-10, 100_000)
        assert ok

    return time_call(run)


def bench_angle_sums(backend, K, radii):
    verts = np.asarray(K.interior_vertices, dtype=np.int32)

    def run():
        for _ in range(50):
            backend.angle_sums(radii, K.fan_a, K.fan_b, K.fan_offsets, verts)

    return time_call(run)


def bench_walk(backend, kern, trials):
    def run():
        backend.mc_return_hits(kern.indptr, kern.indices, kern.cum, 0, 300,
                               0, trials, 42)

    return time_call(run)


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--ball", type=int, default=8,
                        help="hex ball radius for the solver benchmark")
    parser.add_argument("--trials", type=int, default=20_000,
                        help="Monte Carlo trials")
    args = parser.parse_args()

    K = hex_ball(args.ball)
    rng = np.random.default_rng(0)
    profile = np.exp(rng.uniform(-0.5, 0.5, len(K.boundary_vertices)))
    radii = np.exp(rng.uniform(-1, 1, K.vertex_count))
    kern = transition_kernel(simple_network(hex_ball(5)))

    backends = available_backends()
    print(f"hex ball radius {args.ball}: V={K.vertex_count}, "
          f"F={K.face_count}; walk trials {args.trials}")
    rows = []
    for backend in backends:
        rows.append((backend.BACKEND, {
            "relax": bench_relax(backend, K, profile),
            "angle_sums x50": bench_angle_sums(backend, K, radii),
            "mc_walk": bench_walk(backend, kern, args.trials),
        }))

    kernels = list(rows[0][1])
    header = f"{'kernel':<16}" + "".join(f"{name:>12}" for name, _ in rows)
    if len(rows) == 2:
        header += f"{'speedup':>10}"
    print(header)
    for kernel in kernels:
        line = f"{kernel:<16}"
        for _, times in rows:
            line += f"{times[kernel] * 1000:>10.1f}ms"
        if len(rows) == 2:
            line += f"{rows[1][1][kernel] / rows[0][1][kernel]:>9.1f}x"
        print(line)


if __name__ == "__main__":
    main()
