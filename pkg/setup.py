from setuptools import Extension, setup

# The triangle-scan kernel compiles when Cython and the numpy headers are
# available; the package falls back to the numpy implementation otherwise
# (see mutclust.triangles).
try:
    import numpy
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [
            Extension(
                "mutclust._tricheck",
                ["src/mutclust/_tricheck.pyx"],
                include_dirs=[numpy.get_include()],
                define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
                extra_compile_args=["-O3"],
            )
        ],
        compiler_directives={"language_level": "3"},
    )
except ImportError:
    ext_modules = []

setup(ext_modules=ext_modules)
