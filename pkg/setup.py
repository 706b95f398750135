"""Builds the optional compiled DSP kernel.

The package works without it: presetlab.kernels falls back to a
scipy-based implementation at import time. See benchmarks/bench_render.py
for the speed difference.
"""

from setuptools import Extension, setup

try:
    import numpy
    from Cython.Build import cythonize

    extensions = cythonize(
        [
            Extension(
                "presetlab._kernels",
                ["src/presetlab/_kernels.pyx"],
                include_dirs=[numpy.get_include()],
            )
        ],
        compiler_directives={
            "language_level": 3,
            "boundscheck": False,
            "wraparound": False,
            "cdivision": True,
        },
    )
except ImportError:
    extensions = []

setup(ext_modules=extensions)
