"""Build the optional compiled exploration kernel.

Without Cython or a C compiler the package installs pure Python and
``memsys._accel`` falls back to ``memsys._kernels_py``.
"""

from setuptools import setup
from setuptools.command.build_ext import build_ext

try:
    from Cython.Build import cythonize
except ImportError:
    cythonize = None


class OptionalBuildExt(build_ext):
    def run(self):
        try:
            super().run()
        except Exception as exc:  # compiler missing or failing
            print(f"warning: compiled kernel not built ({exc}); using pure Python")

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:
            print(f"warning: {ext.name} not built ({exc}); using pure Python")


ext_modules = []
if cythonize is not None:
    ext_modules = cythonize(
        ["src/memsys/_kernels.pyx"],
        compiler_directives={"language_level": "3"},
        quiet=True,
    )

setup(ext_modules=ext_modules, cmdclass={"build_ext": OptionalBuildExt})
