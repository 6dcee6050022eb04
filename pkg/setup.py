"""Build script: compiles the GF(p) elimination kernel when Cython and a C
compiler are available.  The package works without it (numpy fallback), so the
extension is marked optional and any build failure degrades gracefully."""

from setuptools import Extension, setup

ext_modules = []
try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [
            Extension(
                "koszulkit.exact_linalg._gfcore",
                ["src/koszulkit/exact_linalg/_gfcore.pyx"],
                extra_compile_args=["-O3"],
                optional=True,
            )
        ],
        language_level="3",
    )
except ImportError:
    pass

setup(ext_modules=ext_modules)
