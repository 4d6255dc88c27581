"""Build shim: compiles the adaptive-RK kernel extension when Cython and a
C compiler are available; the package falls back to the pure-Python kernel
at import time if the extension is missing."""

from setuptools import setup

ext_modules = []
try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        ["src/predbif/_rk_cy.pyx"], compiler_directives={"language_level": "3"}
    )
except ImportError:
    pass

setup(ext_modules=ext_modules)
