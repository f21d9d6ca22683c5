import numpy as np
from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:
    # Pure-Python install still works; odx._kernels falls back at import time.
    ext_modules = []
else:
    ext_modules = cythonize(
        [
            Extension(
                "odx._kernels._fast",
                ["src/odx/_kernels/_fast.pyx"],
                include_dirs=[np.get_include()],
                extra_compile_args=["-O3"],
            )
        ],
        compiler_directives={"language_level": "3"},
    )

setup(ext_modules=ext_modules)
