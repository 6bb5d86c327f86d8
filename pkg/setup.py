"""Build hook for the optional compiled search kernel.

Without Cython, or if compilation fails, the package installs in pure-Python
mode and ``deontasp.asp.solve`` falls back to ``_search``.
"""

from setuptools import setup

ext_modules = []
try:
    from Cython.Build import cythonize
    from setuptools import Extension

    ext_modules = cythonize(
        [Extension("deontasp.asp._csearch", ["src/deontasp/asp/_csearch.pyx"])],
        compiler_directives={"language_level": "3"},
        quiet=True,
    )
except ImportError:
    pass

setup(ext_modules=ext_modules)
