import os

from setuptools import Extension, setup

try:
    import numpy as np
    from Cython.Build import cythonize
except ImportError:  # fallback kernels are used at import time
    ext_modules = []
else:
    ext_modules = cythonize(
        [
            Extension(
                "wavefeat._ckernels",
                [os.path.join("src", "wavefeat", "_ckernels.pyx")],
                include_dirs=[np.get_include()],
                extra_compile_args=["-O3"],
                define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
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
