"""Build script for the optional compiled kernels.

The package works without the extension (a pure-NumPy fallback is selected
at import time), so the extension is marked optional: a missing compiler
degrades performance, not functionality.
"""

import numpy
from setuptools import Extension, setup
from Cython.Build import cythonize

ext = Extension(
    "nhtopo._kernels_cy",
    ["src/nhtopo/_kernels_cy.pyx"],
    include_dirs=[numpy.get_include()],
    define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
    extra_compile_args=["-O3"],
    optional=True,
)

setup(ext_modules=cythonize([ext], language_level=3))
