"""Build script: compiles the optional C extension for the hot indicator kernels.

The package works without the extension (a pure-Python twin is selected at
import time), so any build failure here is non-fatal: install with
``MIDAS_SKIP_EXT=1 pip install -e . --no-build-isolation`` to skip it.
"""
import os

from setuptools import Extension, setup

ext_modules = []
if os.environ.get("MIDAS_SKIP_EXT") != "1":
    try:
        from Cython.Build import cythonize

        ext_modules = cythonize(
            [Extension("midas._ckernels", sources=["src/midas/_ckernels.pyx"])],
            compiler_directives={
                "language_level": "3",
                "boundscheck": False,
                "wraparound": False,
                "cdivision": True,
            },
        )
    except ImportError:
        pass

setup(ext_modules=ext_modules)
