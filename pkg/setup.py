"""Build script: compiles the optional scoring kernels.

The package is fully functional without the compiled extension -- the
pure-Python kernels in ``halograph.kernels._purepy`` are the reference
implementation and every build failure below degrades to them.
"""

import sys

from setuptools import Extension, setup
from setuptools.command.build_ext import build_ext


class OptionalBuildExt(build_ext):
    """Build the extension if we can, fall back to pure Python if not."""

    def run(self):
        try:
            super().run()
        except Exception as exc:  # pragma: no cover - toolchain dependent
            self._skip(exc)

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:  # pragma: no cover - toolchain dependent
            self._skip(exc)

    @staticmethod
    def _skip(exc):
        print(
            "WARNING: failed to compile halograph._speedups "
            f"({exc!r}); falling back to the pure-Python kernels",
            file=sys.stderr,
        )


def extensions():
    try:
        from Cython.Build import cythonize
    except ImportError:  # pragma: no cover - Cython is a build requirement
        return []
    return cythonize(
        [
            Extension(
                "halograph.kernels._speedups",
                ["src/halograph/kernels/_speedups.pyx"],
                extra_compile_args=["-O3"],
            )
        ],
        language_level=3,
    )


setup(ext_modules=extensions(), cmdclass={"build_ext": OptionalBuildExt})
