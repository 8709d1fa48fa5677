"""Build script for the compiled sampling kernels.

The extension is optional: set RELCALC_PURE_PYTHON=1 (or build without
Cython) to install the pure-Python fallback only. -ffp-contract=off keeps
the C arithmetic bit-identical to the fallback (no fused multiply-adds).
"""

import os

from setuptools import Extension, setup

ext_modules = []
if os.environ.get("RELCALC_PURE_PYTHON") != "1":
    try:
        from Cython.Build import cythonize
    except ImportError:
        cythonize = None
    if cythonize is not None:
        ext_modules = cythonize(
            [
                Extension(
                    "relcalc._kernels",
                    ["src/relcalc/_kernels.pyx"],
                    extra_compile_args=["-O3", "-ffp-contract=off"],
                )
            ],
            compiler_directives={"language_level": "3"},
        )

setup(ext_modules=ext_modules)
