import os

from setuptools import Extension, setup

ext_modules = []
if os.environ.get("GRADEDLIE_NO_EXT") != "1":
    try:
        from Cython.Build import cythonize

        ext_modules = cythonize(
            [Extension("gradedlie._echelon_cy", ["src/gradedlie/_echelon_cy.pyx"])],
            language_level=3,
        )
    except ImportError:
        # No Cython: the pure-Python kernel is used instead.
        ext_modules = []

setup(ext_modules=ext_modules)
