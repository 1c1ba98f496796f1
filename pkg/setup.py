"""Builds the optional compiled sliding-window kernel.

The package is fully functional without the extension: a pure-Python
fallback with identical semantics is selected at import time.  Set
EMODYN_PURE_PYTHON=1 to skip compilation entirely.
"""

import os

from setuptools import Extension, setup

ext_modules = []
if not os.environ.get("EMODYN_PURE_PYTHON"):
    try:
        from Cython.Build import cythonize

        ext_modules = cythonize(
            [
                Extension(
                    "emodyn._kernels._window",
                    ["src/emodyn/_kernels/_window.pyx"],
                )
            ],
            language_level="3",
        )
    except ImportError:
        ext_modules = []

setup(ext_modules=ext_modules)
