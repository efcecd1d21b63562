"""Build script: compiles the optional Cython kernel.

The package is fully functional without the extension; a failed compile
falls back to the pure-Python kernel selected at import time.
"""

from setuptools import setup

ext_modules = []
try:
    from Cython.Build import cythonize
    from setuptools import Extension

    ext_modules = cythonize(
        [
            Extension(
                "nilpal._speedups",
                ["src/nilpal/_speedups.pyx"],
                extra_compile_args=["-O2"],
                optional=True,
            )
        ],
        language_level=3,
    )
except ImportError:
    pass

setup(ext_modules=ext_modules)
