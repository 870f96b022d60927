"""Backend selection for the numeric kernels.

Set ``ANTICORE_DISABLE_NUMBA=1`` to force the pure-numpy code paths, e.g. for
debugging or on platforms without numba.  The flag is read once at import.
"""
import os

_FALSY = ("", "0", "false", "no", "off")

USE_NUMBA = os.environ.get("ANTICORE_DISABLE_NUMBA", "0").strip().lower() in _FALSY

try:
    from numba import njit as _njit
except ImportError:  # pragma: no cover - numba is a declared dependency
    _njit = None
    USE_NUMBA = False

HAVE_NUMBA = _njit is not None


def njit(fn):
    """Compile ``fn`` with numba when available, else return it unchanged."""
    if _njit is None:
        return fn
    return _njit(cache=True, nogil=True)(fn)


def backend_name():
    return "numba" if USE_NUMBA else "numpy"
