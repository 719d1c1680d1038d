"""Build script.

The compiled kernel extension is optional: when Cython (or a C compiler)
is unavailable the install falls back to the pure Python kernels in
beaconlab._kernels_py, selected at import time by beaconlab.kernels.
"""

from setuptools import setup

ext_modules = []
try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        ["src/beaconlab/_kernels.pyx"],
        language_level=3,
        compiler_directives={"boundscheck": False, "wraparound": False},
    )
except Exception:
    ext_modules = []

setup(ext_modules=ext_modules)
