from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:
    cythonize = None

# -ffp-contract=off: the compiled kernel must round every multiply/add
# separately so its output is bit-identical to the pure-Python lane.
extensions = [
    Extension(
        "bmo.kernel._ckernel",
        ["src/bmo/kernel/_ckernel.pyx"],
        extra_compile_args=["-O2", "-ffp-contract=off"],
        optional=True,
    )
]

setup(
    ext_modules=cythonize(
        extensions,
        compiler_directives={"language_level": "3"},
    )
    if cythonize
    else [],
)
