"""Build script for the compiled kernels.

Project metadata lives in pyproject.toml; this file only declares the Cython
extension. ``-ffp-contract=off`` keeps the compiler from fusing multiply-add
pairs, so the compiled loops round exactly like the pure-Python fallback.
"""
import numpy as np
from Cython.Build import cythonize
from setuptools import Extension, setup

extensions = [
    Extension(
        "teichcurrents._ckernels",
        ["src/teichcurrents/_ckernels.pyx"],
        include_dirs=[np.get_include()],
        define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
        extra_compile_args=["-O2", "-ffp-contract=off", "-fno-fast-math"],
    )
]

setup(ext_modules=cythonize(extensions, compiler_directives={"language_level": "3"}))
