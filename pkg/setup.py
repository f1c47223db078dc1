"""Build script: compiles the Cython time-stepping core when possible.

The extension is optional -- if Cython or a C compiler is missing the
package installs anyway and falls back to the pure-numpy stepper at
import time (vpl.bogolyubov reports which one is active).
"""
import os

from setuptools import Extension, setup

ext_modules = []
if os.environ.get("VPL_NO_EXTENSION", "0") != "1":
    try:
        import numpy
        from Cython.Build import cythonize

        ext = Extension(
            "vpl._stepper",
            ["src/vpl/_stepper.pyx"],
            include_dirs=[numpy.get_include()],
            define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
            extra_compile_args=["-O3"],
            optional=True,
        )
        ext_modules = cythonize([ext], language_level="3")
    except ImportError:
        ext_modules = []

setup(ext_modules=ext_modules)
