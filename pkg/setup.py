from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:  # pure-Python install; numrange falls back at import
    ext_modules = []
else:
    ext_modules = cythonize(
        [
            Extension(
                "numrange._kernels",
                ["src/numrange/_kernels.pyx"],
                extra_compile_args=["-O3"],
                optional=True,
            )
        ],
        compiler_directives={"language_level": "3"},
    )

setup(ext_modules=ext_modules)
