"""Pure-Python kernels: fallback used when the compiled extension is absent.

Signatures and numerical behaviour mirror `_speedups`. The random-walk
kernel uses the same splitmix64 stream as the compiled one, so estimates
are bit-identical across backends for a fixed seed.
"""

from __future__ import annotations

import math

import numpy as np

BACKEND = "python"

_MASK = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15


def _corner(rv: float, ra: float, rb: float) -> float:
    x = rv + ra
    y = rv + rb
    z = ra + rb
    arg = (x * x + y * y - z * z) / (2.0 * x * y)
    if arg > 1.0:
        arg = 1.0
    elif arg < -1.0:
        arg = -1.0
    return math.acos(arg)


def _fan_theta(r, radii, fan_a, fan_b, start, end):
    total = 0.0
    for k in range(start, end):
        total += _corner(r, radii[fan_a[k]], radii[fan_b[k]])
    return total


def _fan_dtheta(r, radii, fan_a, fan_b, start, end):
    # d(theta)/dr < 0: per face -sqrt(S/(2-S)) * (1/(r+ra) + 1/(r+rb))
    # with S = 2*ra*rb/((r+ra)(r+rb)).
    total = 0.0
    for k in range(start, end):
        ra = radii[fan_a[k]]
        rb = radii[fan_b[k]]
        s = 2.0 * ra * rb / ((r + ra) * (r + rb))
        total -= math.sqrt(s / (2.0 - s)) * (1.0 / (r + ra) + 1.0 / (r + rb))
    return total


def angle_sums(radii: np.ndarray, fan_a: np.ndarray, fan_b: np.ndarray,
               offsets: np.ndarray, verts: np.ndarray) -> np.ndarray:
    """Angle sum at each vertex of `verts` for the given radii."""
    rl = radii.tolist()
    fa = fan_a.tolist()
    fb = fan_b.tolist()
    off = offsets.tolist()
    out = np.empty(len(verts), dtype=np.float64)
    for i, v in enumerate(verts.tolist()):
        out[i] = _fan_theta(rl[v], rl, fa, fb, off[v], off[v + 1])
    return out


def _solve_vertex(rl, fa, fb, start, end, r0, target):
    """Root of theta(r) = target on the fan slice, theta strictly decreasing."""
    r = r0
    g = _fan_theta(r, rl, fa, fb, start, end) - target
    if g == 0.0:
        return r
    if g > 0.0:
        lo, hi = r, r
        for _ in range(300):
            hi *= 2.0
            if _fan_theta(hi, rl, fa, fb, start, end) - target <= 0.0:
                break
            lo = hi
    else:
        lo, hi = r, r
        for _ in range(300):
            lo *= 0.5
            if _fan_theta(lo, rl, fa, fb, start, end) - target >= 0.0:
                break
            hi = lo
    r = 0.5 * (lo + hi)
    for _ in range(120):
        g = _fan_theta(r, rl, fa, fb, start, end) - target
        if g > 0.0:
            lo = r
        elif g < 0.0:
            hi = r
        else:
            return r
        d = _fan_dtheta(r, rl, fa, fb, start, end)
        rn = r - g / d if d != 0.0 else 0.5 * (lo + hi)
        if not lo < rn < hi:
            rn = 0.5 * (lo + hi)
        if abs(rn - r) <= 1e-15 * r:
            return rn
        r = rn
        if hi - lo <= 1e-15 * lo:
            break
    return r


def solve_vertex(radii: np.ndarray, fan_a: np.ndarray, fan_b: np.ndarray,
                 start: int, end: int, r0: float, target: float) -> float:
    return _solve_vertex(radii.tolist(), fan_a.tolist(), fan_b.tolist(),
                         start, end, r0, target)


def relax(radii: np.ndarray, targets: np.ndarray, fan_a: np.ndarray,
          fan_b: np.ndarray, offsets: np.ndarray, order: np.ndarray,
          tol: float, max_sweeps: int) -> tuple[int, float, bool]:
    """Gauss-Seidel sweeps over `order` until the angle-sum residual of the
    current label is at most `tol`. Mutates `radii` in place and returns
    (sweeps, max_residual, converged)."""
    verts = order.tolist()
    if not verts:
        return 0, 0.0, True
    rl = radii.tolist()
    tg = targets.tolist()
    fa = fan_a.tolist()
    fb = fan_b.tolist()
    off = offsets.tolist()
    maxres = math.inf
    sweeps = 0
    while sweeps < max_sweeps:
        sweeps += 1
        for v in verts:
            rl[v] = _solve_vertex(rl, fa, fb, off[v], off[v + 1], rl[v], tg[v])
        maxres = 0.0
        for v in verts:
            res = abs(_fan_theta(rl[v], rl, fa, fb, off[v], off[v + 1]) - tg[v])
            if res > maxres:
                maxres = res
        if maxres <= tol:
            radii[:] = rl
            return sweeps, maxres, True
    radii[:] = rl
    return sweeps, maxres, False


def _mix(z: int) -> int:
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK
    return z ^ (z >> 31)


def mc_return_hits(indptr: np.ndarray, indices: np.ndarray, cum: np.ndarray,
                   root: int, max_steps: int, trial_start: int,
                   trial_count: int, seed: int) -> int:
    """Count walks (trials trial_start..trial_start+trial_count-1) that
    revisit `root` within `max_steps` steps. Per-trial streams depend only
    on (seed, absolute trial index), so any partition of the trial range
    yields the same total."""
    ip = indptr.tolist()
    nb = indices.tolist()
    cp = cum.tolist()
    hits = 0
    for trial in range(trial_start, trial_start + trial_count):
        state = _mix((seed ^ ((trial + 1) * _GOLDEN)) & _MASK)
        cur = root
        for _ in range(max_steps):
            state = (state + _GOLDEN) & _MASK
            u = (_mix(state) >> 11) * 1.1102230246251565e-16  # 2**-53
            j = ip[cur]
            last = ip[cur + 1] - 1
            while j < last and u >= cp[j]:
                j += 1
            cur = nb[j]
            if cur == root:
                hits += 1
                break
    return hits
