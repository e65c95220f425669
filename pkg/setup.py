import os

import numpy as np
from setuptools import setup, Extension

try:
    from Cython.Build import cythonize
except ImportError:
    cythonize = None

ext_modules = []
if cythonize is not None and os.environ.get("REQMATCH_NO_EXT") != "1":
    ext_modules = cythonize(
        [
            Extension(
                "reqmatch.numcore._kernels_cy",
                ["src/reqmatch/numcore/_kernels_cy.pyx"],
                include_dirs=[np.get_include()],
                extra_compile_args=["-O3"],
            )
        ],
        language_level=3,
    )

setup(ext_modules=ext_modules)
