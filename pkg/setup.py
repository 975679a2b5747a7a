"""Build script: compiles the optional lab-propagation kernel.

The extension is marked optional so the package installs (and the full
test suite passes on the numpy fallback) even without a C toolchain;
``python setup.py build_ext --inplace`` or a normal pip install builds it
when Cython and a compiler are available.
"""

from setuptools import Extension, setup

ext_modules = []
try:
    import numpy as np
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [
            Extension(
                "nverc._kernels._rk4",
                ["src/nverc/_kernels/_rk4.pyx"],
                include_dirs=[np.get_include()],
                extra_compile_args=["-O3"],
                optional=True,
            )
        ],
        compiler_directives={"language_level": "3"},
    )
except ImportError:
    pass

setup(ext_modules=ext_modules)
