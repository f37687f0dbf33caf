import os

import numpy as np
from setuptools import Extension, setup

ext_modules = []
if not os.environ.get("DAGWITT_NO_EXT"):
    try:
        from Cython.Build import cythonize

        ext_modules = cythonize(
            [
                Extension(
                    "dagwitt._ext._kernels",
                    ["src/dagwitt/_ext/_kernels.pyx"],
                    include_dirs=[np.get_include()],
                    language="c++",
                    extra_compile_args=["-O3"],
                )
            ],
            compiler_directives={"language_level": "3"},
        )
    except ImportError:
        ext_modules = []

setup(ext_modules=ext_modules)
