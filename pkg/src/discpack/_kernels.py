"""Kernel backend selection.

The compiled extension is preferred; set DISCPACK_PURE=1 to force the
pure-Python fallback. Both expose the same functions with interchangeable
numerics (identical random streams, same fixed points within tolerance).
"""

import os

if os.environ.get("DISCPACK_PURE"):
    from . import _pykernels as impl
else:
    try:
        from . import _speedups as impl  # type: ignore[attr-defined]
    except ImportError:
        from . import _pykernels as impl

BACKEND: str = impl.BACKEND
angle_sums = impl.angle_sums
solve_vertex = impl.solve_vertex
relax = impl.relax
mc_return_hits = impl.mc_return_hits


def available_backends():
    """Importable kernel modules, compiled first when present."""
    backends = []
    try:
        from . import _speedups
        backends.append(_speedups)
    except ImportError:
        pass
    from . import _pykernels
    backends.append(_pykernels)
    return backends
