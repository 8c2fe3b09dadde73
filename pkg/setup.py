import os

import numpy as np
from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:  # pure-Python install; pcl.kernels falls back at import
    cythonize = None

ext_modules = []
if cythonize is not None and not os.environ.get("PCL_NO_EXTENSION"):
    ext_modules = cythonize(
        [
            Extension(
                "pcl._ckernels",
                ["src/pcl/_ckernels.pyx"],
                include_dirs=[np.get_include()],
                define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
                extra_compile_args=["-O3"],
            )
        ],
        compiler_directives={
            "language_level": "3",
            "boundscheck": False,
            "wraparound": False,
            "cdivision": True,
        },
    )

setup(ext_modules=ext_modules)
