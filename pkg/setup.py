from Cython.Build import cythonize
from setuptools import Extension, setup

# No -ffast-math, and no FP contraction: the compiled kernels must be
# bit-identical to the pure NumPy backend, including the order and
# rounding of every float accumulation.
extensions = [
    Extension(
        "mvconceal.kernels._native",
        ["src/mvconceal/kernels/_native.pyx"],
        extra_compile_args=["-O3", "-ffp-contract=off"],
    )
]

setup(
    ext_modules=cythonize(
        extensions,
        compiler_directives={"language_level": "3"},
    )
)
