"""Build the optional compiled kernels.

The extension is a pure speedup: if Cython or a C compiler is missing the
install still succeeds and the package falls back to the reference
implementation in ``unitals.kernels._py`` at import time.
"""

from setuptools import setup

ext_modules = []
try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        "src/unitals/kernels/_cy.pyx",
        compiler_directives={
            "language_level": 3,
            "boundscheck": False,
            "wraparound": False,
            "cdivision": True,
        },
    )
except ImportError:
    pass

setup(ext_modules=ext_modules)
