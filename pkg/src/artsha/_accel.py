"""Optional numba acceleration.

The hot loops in :mod:`artsha.kernels` are written twice: once as plain
Python loops compiled with numba, once as vectorized numpy.  The numba
versions are used when numba imports cleanly and ``ARTSHA_DISABLE_NUMBA``
is unset (or set to ``0``).
"""

import os

try:
    import numba as _numba
except ImportError:  # pragma: no cover - numba is a declared dependency
    _numba = None

_FLAG = "ARTSHA_DISABLE_NUMBA"


def numba_available():
    return _numba is not None


def numba_requested():
    """True unless the environment asks for the numpy fallback."""
    return os.environ.get(_FLAG, "0").strip().lower() in ("", "0", "false", "no")


USE_NUMBA = numba_available() and numba_requested()


def njit(fn):
    """Compile ``fn`` with numba if it is installed, else return it unchanged."""
    if _numba is None:
        return fn
    return _numba.njit(cache=True, nogil=True)(fn)
