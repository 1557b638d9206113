"""Build script for the compiled sampling kernel.

The package works without the extension (a numpy fallback is selected at
import time), but the compiled kernel is much faster for large Monte Carlo
runs, so the build treats Cython and the numpy headers as hard requirements.
"""
from pathlib import Path

import numpy as np
from Cython.Build import cythonize
from setuptools import Extension, setup

# random_standard_exponential and friends live in numpy's static helper lib
npyrandom_dir = Path(np.random.__file__).parent / "lib"

ext = Extension(
    "duelsim._exitcore",
    ["src/duelsim/_exitcore.pyx"],
    include_dirs=[np.get_include()],
    library_dirs=[str(npyrandom_dir)],
    libraries=["npyrandom"],
    define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
)

setup(ext_modules=cythonize([ext], language_level=3))
