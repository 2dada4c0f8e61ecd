"""Build script.

The package is pure Python except for one optional Cython extension,
``wildram._ckernels``, holding the coefficient-convolution kernels that
dominate runtime.  If Cython or a C compiler is missing the build falls
back to the pure-Python kernels in ``wildram._pykernels`` (same API,
selected at import time by ``wildram.kernel``).
"""

import sys

from setuptools import Extension, setup
from setuptools.command.build_ext import build_ext


def extensions():
    try:
        from Cython.Build import cythonize
    except ImportError:
        sys.stderr.write("setup.py: Cython not available, skipping _ckernels\n")
        return []
    return cythonize(
        [Extension("wildram._ckernels", ["src/wildram/_ckernels.pyx"])],
        language_level=3,
    )


class optional_build_ext(build_ext):
    """Let the compile step fail without failing the install."""

    def run(self):
        try:
            super().run()
        except Exception as exc:  # compiler missing, etc.
            sys.stderr.write(f"setup.py: extension build failed ({exc}); "
                             "falling back to pure-Python kernels\n")

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:
            sys.stderr.write(f"setup.py: building {ext.name} failed ({exc}); "
                             "falling back to pure-Python kernels\n")


setup(ext_modules=extensions(), cmdclass={"build_ext": optional_build_ext})
