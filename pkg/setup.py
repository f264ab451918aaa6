"""Build script for the optional compiled update kernels.

The package works without the extension (a numpy fallback is selected at
import time), so a failed compile downgrades to a pure-Python install
instead of aborting.
"""

from setuptools import Extension, setup


def _extensions():
    try:
        import numpy
        from Cython.Build import cythonize
    except ImportError:
        return []
    ext = Extension(
        "lrdopt._kernels._fused",
        ["src/lrdopt/_kernels/_fused.pyx"],
        include_dirs=[numpy.get_include()],
        # -ffp-contract=off: the kernels must round every intermediate the
        # same way the numpy fallback does; FMA contraction would break the
        # bit-for-bit backend equivalence the tests assert.
        extra_compile_args=["-O3", "-ffp-contract=off"],
    )
    try:
        return cythonize([ext], compiler_directives={"language_level": "3"})
    except Exception:
        return []


setup(ext_modules=_extensions())
