"""Build script for the optional Cython kernels.

The package works without them: ``luckmeter._backend`` falls back to the
pure-Python implementation when the extension is missing.
"""
import os
import sys

from setuptools import Extension, setup
from setuptools.command.build_ext import build_ext


class OptionalBuildExt(build_ext):
    def run(self):
        try:
            super().run()
        except Exception as exc:  # noqa: BLE001
            print(f"warning: Cython kernels not built ({exc}); using pure-Python fallback",
                  file=sys.stderr)

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:  # noqa: BLE001
            print(f"warning: failed to build {ext.name} ({exc})", file=sys.stderr)


def extensions():
    if os.environ.get("LUCKMETER_NO_EXT"):
        return []
    try:
        from Cython.Build import cythonize
    except ImportError:
        return []
    ext = Extension(
        "luckmeter._kernels",
        ["src/luckmeter/_kernels.pyx"],
        extra_compile_args=["-O3"],
    )
    return cythonize([ext], compiler_directives={"language_level": "3"})


setup(ext_modules=extensions(), cmdclass={"build_ext": OptionalBuildExt})
