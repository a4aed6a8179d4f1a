"""Build script for the optional compiled geometry kernels.

The package works without the extension (a numpy fallback is selected at
import time); building it just makes the hot loops faster.

    python setup.py build_ext --inplace
"""

from setuptools import setup
from setuptools.extension import Extension

try:
    import numpy
    from Cython.Build import cythonize

    extensions = cythonize(
        [
            Extension(
                "glyphsmith._kernels._fastgeom",
                ["src/glyphsmith/_kernels/_fastgeom.pyx"],
                include_dirs=[numpy.get_include()],
                # -ffp-contract=off keeps the C arithmetic IEEE per-op, so the
                # compiled kernels track the numpy fallback bit-for-bit on the
                # pointwise paths.
                extra_compile_args=["-O3", "-ffp-contract=off"],
                define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
            )
        ],
        language_level=3,
    )
except ImportError:
    extensions = []

setup(ext_modules=extensions)
