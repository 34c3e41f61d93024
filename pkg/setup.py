import numpy as np
from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:
    cythonize = None

if cythonize is not None:
    ext_modules = cythonize(
        [
            Extension(
                "fractree._kernels",
                ["src/fractree/_kernels.pyx"],
                include_dirs=[np.get_include()],
                # -ffp-contract=off keeps results bit-identical to the
                # numpy fallback (no FMA contraction).
                extra_compile_args=["-O3", "-ffp-contract=off"],
            )
        ],
        compiler_directives={"language_level": "3"},
    )
else:
    # Pure-Python install; fractree falls back to the numpy kernels.
    ext_modules = []

setup(ext_modules=ext_modules)
