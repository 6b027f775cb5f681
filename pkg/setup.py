import numpy
from setuptools import setup

try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        ["src/pinchlab/_kernels/_fastcore.pyx"],
        compiler_directives={
            "language_level": "3",
            "boundscheck": False,
            "wraparound": False,
            "cdivision": True,
        },
    )
except ImportError:
    # No Cython around: install the pure python package, the runtime
    # backend selector will fall back on its own.
    ext_modules = []

setup(ext_modules=ext_modules, include_dirs=[numpy.get_include()])
