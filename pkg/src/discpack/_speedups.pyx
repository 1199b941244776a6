# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled kernels: fan angle sums, per-vertex monotone solves,
Gauss-Seidel relaxation, and the seeded random-walk loop.

Must stay numerically interchangeable with `_pykernels` (same algorithms,
same splitmix64 stream); the dispatcher in `_kernels` picks whichever is
importable.
"""

import numpy as np

cimport numpy as cnp
from libc.math cimport acos, fabs, sqrt

BACKEND = "cython"

ctypedef cnp.float64_t f64
ctypedef cnp.int32_t i32

cdef unsigned long long _GOLDEN = 0x9E3779B97F4A7C15ULL
cdef double _INV53 = 1.1102230246251565e-16  # 2**-53


cdef inline double _corner(double rv, double ra, double rb) noexcept nogil:
    cdef double x = rv + ra
    cdef double y = rv + rb
    cdef double z = ra + rb
    cdef double arg = (x * x + y * y - z * z) / (2.0 * x * y)
    if arg > 1.0:
        arg = 1.0
    elif arg < -1.0:
        arg = -1.0
    return acos(arg)


cdef double _fan_theta(double r, const f64[:] radii, const i32[:] fan_a, const i32[:] fan_b,
                       int start, int end) noexcept nogil:
    cdef double total = 0.0
    cdef int k
    for k in range(start, end):
        total += _corner(r, radii[fan_a[k]], radii[fan_b[k]])
    return total


cdef double _fan_dtheta(double r, const f64[:] radii, const i32[:] fan_a, const i32[:] fan_b,
                        int start, int end) noexcept nogil:
    cdef double total = 0.0
    cdef double ra, rb, s
    cdef int k
    for k in range(start, end):
        ra = radii[fan_a[k]]
        rb = radii[fan_b[k]]
        s = 2.0 * ra * rb / ((r + ra) * (r + rb))
        total -= sqrt(s / (2.0 - s)) * (1.0 / (r + ra) + 1.0 / (r + rb))
    return total


def angle_sums(const f64[:] radii, const i32[:] fan_a, const i32[:] fan_b,
               const i32[:] offsets, const i32[:] verts):
    out = np.empty(verts.shape[0], dtype=np.float64)
    cdef f64[:] o = out
    cdef int i, v
    for i in range(verts.shape[0]):
        v = verts[i]
        o[i] = _fan_theta(radii[v], radii, fan_a, fan_b,
                          offsets[v], offsets[v + 1])
    return out


cdef double _solve_vertex(const f64[:] radii, const i32[:] fan_a, const i32[:] fan_b,
                          int start, int end, double r0,
                          double target) noexcept nogil:
    cdef double r = r0
    cdef double g = _fan_theta(r, radii, fan_a, fan_b, start, end) - target
    cdef double lo, hi, d, rn
    cdef int it
    if g == 0.0:
        return r
    if g > 0.0:
        lo = r
        hi = r
        for it in range(300):
            hi *= 2.0
            if _fan_theta(hi, radii, fan_a, fan_b, start, end) - target <= 0.0:
                break
            lo = hi
    else:
        lo = r
        hi = r
        for it in range(300):
            lo *= 0.5
            if _fan_theta(lo, radii, fan_a, fan_b, start, end) - target >= 0.0:
                break
            hi = lo
    r = 0.5 * (lo + hi)
    for it in range(120):
        g = _fan_theta(r, radii, fan_a, fan_b, start, end) - target
        if g > 0.0:
            lo = r
        elif g < 0.0:
            hi = r
        else:
            return r
        d = _fan_dtheta(r, radii, fan_a, fan_b, start, end)
        if d != 0.0:
            rn = r - g / d
        else:
            rn = 0.5 * (lo + hi)
        if not (lo < rn and rn < hi):
            rn = 0.5 * (lo + hi)
        if fabs(rn - r) <= 1e-15 * r:
            return rn
        r = rn
        if hi - lo <= 1e-15 * lo:
            break
    return r


def solve_vertex(const f64[:] radii, const i32[:] fan_a, const i32[:] fan_b, int start, int end,
                 double r0, double target):
    return _solve_vertex(radii, fan_a, fan_b, start, end, r0, target)


def relax(f64[:] radii, const f64[:] targets, const i32[:] fan_a,
          const i32[:] fan_b, const i32[:] offsets, const i32[:] order,
          double tol, long max_sweeps):
    cdef long sweeps = 0
    cdef double maxres = 0.0
    cdef double res
    cdef int i, v
    cdef int n = order.shape[0]
    if n == 0:
        return 0, 0.0, True
    while sweeps < max_sweeps:
        sweeps += 1
        for i in range(n):
            v = order[i]
            radii[v] = _solve_vertex(radii, fan_a, fan_b, offsets[v],
                                     offsets[v + 1], radii[v], targets[v])
        maxres = 0.0
        for i in range(n):
            v = order[i]
            res = fabs(_fan_theta(radii[v], radii, fan_a, fan_b, offsets[v],
                                  offsets[v + 1]) - targets[v])
            if res > maxres:
                maxres = res
        if maxres <= tol:
            return sweeps, maxres, True
    return sweeps, maxres, False


cdef inline unsigned long long _mix(unsigned long long z) noexcept nogil:
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL
    return z ^ (z >> 31)


def mc_return_hits(const i32[:] indptr, const i32[:] indices, const f64[:] cum, int root,
                   long max_steps, long trial_start, long trial_count,
                   unsigned long long seed):
    cdef long hits = 0
    cdef long trial, step
    cdef unsigned long long state
    cdef double u
    cdef int cur, j, last
    for trial in range(trial_start, trial_start + trial_count):
        state = _mix(seed ^ ((<unsigned long long> (trial + 1)) * _GOLDEN))
        cur = root
        for step in range(max_steps):
            state = state + _GOLDEN
            u = <double> (_mix(state) >> 11) * _INV53
            j = indptr[cur]
            last = indptr[cur + 1] - 1
            while j < last and u >= cum[j]:
                j += 1
            cur = indices[j]
            if cur == root:
                hits += 1
                break
    return hits
