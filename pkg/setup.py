import os

from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:
    cythonize = None

extensions = []
pyx = os.path.join("src", "genustutte", "_kernel.pyx")
if cythonize is not None and os.path.exists(pyx):
    extensions = cythonize(
        [
            Extension(
                "genustutte._kernel",
                sources=[pyx],
                extra_compile_args=["-O3"],
            )
        ],
        compiler_directives={"language_level": "3"},
    )

setup(ext_modules=extensions)
