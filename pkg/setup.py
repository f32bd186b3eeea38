"""Build script for the optional compiled kernels.

The package is fully functional without the extension (ctlab.kernels falls
back to the numpy reference implementation at import time), so any failure
to build the extension is downgraded to a warning.

-ffp-contract=off keeps the compiled kernels bit-identical to the numpy
reference: both perform the same sequence of individually rounded IEEE
double operations.
"""

import warnings

from setuptools import setup
from setuptools.command.build_ext import build_ext


class OptionalBuildExt(build_ext):
    def run(self):
        try:
            super().run()
        except Exception as exc:  # missing compiler, etc.
            warnings.warn(f"compiled kernels skipped ({exc}); using the pure fallback")

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:
            warnings.warn(f"compiled kernel {ext.name} skipped ({exc}); using the pure fallback")


def extensions():
    try:
        import numpy
        from Cython.Build import cythonize
    except ImportError as exc:
        warnings.warn(f"compiled kernels skipped ({exc}); using the pure fallback")
        return []
    from setuptools import Extension

    ext = Extension(
        "ctlab.kernels._lattice",
        ["src/ctlab/kernels/_lattice.pyx"],
        include_dirs=[numpy.get_include()],
        extra_compile_args=["-O3", "-ffp-contract=off"],
        define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
    )
    return cythonize([ext], language_level=3)


setup(ext_modules=extensions(), cmdclass={"build_ext": OptionalBuildExt})
