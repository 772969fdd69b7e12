"""Build script: compiles the optional Lindblad kernel extension.

The package is fully functional without the extension (a NumPy fallback is
selected at import time); the build therefore tolerates a missing compiler
or Cython and falls back to a pure-Python install.
"""

from setuptools import setup

ext_modules = []
try:
    import numpy
    from Cython.Build import cythonize
    from setuptools import Extension

    ext_modules = cythonize(
        [
            Extension(
                "radgain.lindblad._core",
                ["src/radgain/lindblad/_core.pyx"],
                include_dirs=[numpy.get_include()],
                define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
                extra_compile_args=["-O3"],
            )
        ],
        compiler_directives={"language_level": "3"},
    )
except ImportError:
    ext_modules = []

setup(ext_modules=ext_modules)
