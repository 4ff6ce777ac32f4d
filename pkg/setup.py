"""Builds the optional compiled kernels; the package works without them."""
import os

from setuptools import setup


def extensions():
    if os.environ.get("MAXCLASS_NO_EXTENSION"):
        return []
    try:
        from Cython.Build import cythonize
    except ImportError:
        return []
    return cythonize(
        ["src/maxclass/_ckernels.pyx"],
        compiler_directives={"language_level": "3"},
        quiet=True,
    )


setup(ext_modules=extensions())
