"""Build script: compiles the optional Cython kernel extension.

The extension is marked optional so installation succeeds on machines
without a C compiler or Cython; qclust._kernels then selects the numpy
fallback at import time.
"""
import numpy as np
from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:
    cythonize = None

extensions = []
if cythonize is not None:
    extensions = cythonize(
        [
            Extension(
                "qclust._kernels._core",
                ["src/qclust/_kernels/_core.pyx"],
                include_dirs=[np.get_include()],
                extra_compile_args=["-O3"],
                optional=True,
            )
        ],
        compiler_directives={
            "language_level": "3",
            "boundscheck": False,
            "wraparound": False,
        },
    )

setup(ext_modules=extensions)
