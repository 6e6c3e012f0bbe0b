"""Build script.

The compiled kernel extension is optional: when Cython (or a C compiler)
is unavailable the package installs anyway and falls back to the pure
numpy kernel lane at import time.
"""
from setuptools import setup

ext_modules = []
try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        ["src/spectra_lab/_cykernels.pyx"],
        compiler_directives={"language_level": "3", "boundscheck": False, "wraparound": False},
    )
except Exception:
    ext_modules = []

setup(ext_modules=ext_modules)
