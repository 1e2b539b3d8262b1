import os

from setuptools import setup

ext_modules = []
if not os.environ.get("REDUCTAG_NO_EXT"):
    try:
        from Cython.Build import cythonize
        from setuptools import Extension

        ext_modules = cythonize(
            [
                Extension(
                    "reductag._kernels._ckernels",
                    ["src/reductag/_kernels/_ckernels.pyx"],
                    extra_compile_args=["-O3", "-ffp-contract=off"],
                )
            ],
            compiler_directives={"language_level": "3"},
        )
    except ImportError:
        # no Cython: the pure-Python kernels are used
        ext_modules = []

setup(ext_modules=ext_modules)
