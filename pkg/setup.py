"""Builds the optional compiled kernel; the package works without it."""

import os
import sys

from setuptools import Extension, setup
from setuptools.command.build_ext import build_ext


class OptionalBuildExt(build_ext):
    def run(self):
        try:
            super().run()
        except Exception as exc:  # no compiler, missing headers, ...
            print(f"warning: compiled kernel not built ({exc}); using pure Python", file=sys.stderr)

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:
            print(f"warning: failed to build {ext.name} ({exc}); using pure Python", file=sys.stderr)


def extensions():
    if os.environ.get("VATWIST_PURE_PYTHON"):
        return []
    try:
        import gmpy2
        from Cython.Build import cythonize
    except ImportError:
        return []
    gmpy2_dir = os.path.dirname(gmpy2.__file__)
    ext = Extension(
        "vatwist._kernels",
        ["src/vatwist/_kernels.pyx"],
        include_dirs=[gmpy2_dir],
        libraries=["gmp"],
        extra_compile_args=["-O2"],
    )
    return cythonize([ext], include_path=[gmpy2_dir], compiler_directives={"language_level": "3"})


setup(ext_modules=extensions(), cmdclass={"build_ext": OptionalBuildExt})
