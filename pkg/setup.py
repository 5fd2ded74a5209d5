"""Build hook for the optional Cython kernels.

The package is fully functional without a compiler: when the extension
cannot be built, ``zygmund_lab._kernels`` falls back to the numpy
implementation in ``_fallback.py``.
"""
import numpy as np
from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:  # pragma: no cover
    cythonize = None

ext_modules = []
if cythonize is not None:
    ext = Extension(
        "zygmund_lab._speedups",
        ["src/zygmund_lab/_speedups.pyx"],
        include_dirs=[np.get_include()],
        extra_compile_args=["-O3"],
        optional=True,
    )
    ext_modules = cythonize(
        [ext],
        compiler_directives={
            "language_level": 3,
            "boundscheck": False,
            "wraparound": False,
            "cdivision": True,
        },
    )

setup(ext_modules=ext_modules)
