"""Build script for the optional compiled kernel extension.

The package works without the extension (a pure-Python fallback is selected
at import time); any compiler failure downgrades to a pure install instead
of aborting.
"""

import sys

from setuptools import setup

try:
    import numpy as np
    from Cython.Build import cythonize
    from setuptools.extension import Extension

    extensions = cythonize(
        [
            Extension(
                "discpack._speedups",
                ["src/discpack/_speedups.pyx"],
                include_dirs=[np.get_include()],
                define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
                extra_compile_args=["-O3"],
            )
        ],
        compiler_directives={"language_level": "3"},
    )
except ImportError as exc:
    print(f"discpack: Cython/numpy unavailable ({exc}), building pure-Python only",
          file=sys.stderr)
    extensions = []

setup(ext_modules=extensions)
