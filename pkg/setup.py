import numpy as np
from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:
    # Pure-python fallback is selected at import time, so a build without
    # Cython still yields a working package.
    ext_modules = []
else:
    ext_modules = cythonize(
        [
            Extension(
                "swarmcut._statevec_cy",
                ["src/swarmcut/_statevec_cy.pyx"],
                include_dirs=[np.get_include()],
            )
        ],
        language_level=3,
    )

setup(ext_modules=ext_modules)
