"""Builds the compiled path-enumeration kernel when Cython is available.

The kernel is optional: without Cython (or a C compiler) the install
falls back to the pure-Python kernel selected at import time.

    python setup.py build_ext --inplace
"""

import os

from setuptools import Extension, setup

ext_modules = []
if os.environ.get("TARAPATH_NO_EXT") != "1":
    try:
        from Cython.Build import cythonize

        ext_modules = cythonize(
            [
                Extension(
                    "tarapath.matching.pathkernel_cy",
                    ["src/tarapath/matching/pathkernel_cy.pyx"],
                    extra_compile_args=["-O2"],
                )
            ],
            compiler_directives={"language_level": "3"},
        )
    except ImportError:
        ext_modules = []

setup(ext_modules=ext_modules)
