"""Kernel backend selection.

The numba backend is used when numba is importable, unless the environment
variable ``ANHARMONIC_DISABLE_NUMBA`` is set to a non-empty value other than
``0``.  Both backends expose the same functions.
"""
import os

from . import numpy_kernels


def _numba_disabled():
    return os.environ.get("ANHARMONIC_DISABLE_NUMBA", "") not in ("", "0")


def load(name=None):
    """Return a backend module by name (``"numba"`` or ``"numpy"``)."""
    if name is None:
        name = "numpy" if _numba_disabled() else "numba"
    if name == "numpy":
        return numpy_kernels
    if name == "numba":
        try:
            from . import numba_kernels
        except ImportError:
            return numpy_kernels
        return numba_kernels
    raise ValueError(f"unknown backend {name!r}")


kernels = load()
