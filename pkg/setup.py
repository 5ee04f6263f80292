"""Builds the optional compiled kernel extension.

The package works without it (a pure-numpy fallback is selected at import
time), so a failed extension build must not fail the install.
"""

from setuptools import Extension, setup
from setuptools.command.build_ext import build_ext


class OptionalBuildExt(build_ext):
    def run(self):
        try:
            super().run()
        except Exception as exc:  # compiler/toolchain missing
            print(f"warning: skipping compiled kernels ({exc})")

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:
            print(f"warning: skipping {ext.name} ({exc})")


def extensions():
    import os

    import numpy
    from Cython.Build import cythonize

    if not os.path.exists("src/fplinq/_kernels/_core.pyx"):
        return []
    ext = Extension(
        "fplinq._kernels._core",
        ["src/fplinq/_kernels/_core.pyx"],
        include_dirs=[numpy.get_include()],
        define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
    )
    return cythonize([ext], language_level=3)


setup(ext_modules=extensions(), cmdclass={"build_ext": OptionalBuildExt})
