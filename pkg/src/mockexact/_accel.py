"""Backend switch for the float64 kernels.

Numba is used when importable unless ``MOCKEXACT_DISABLE_NUMBA`` is set to a
truthy value, in which case every kernel runs through its pure-numpy path.
The flag is read once at import time.
"""

import os

_FLAG = os.environ.get("MOCKEXACT_DISABLE_NUMBA", "").strip().lower()

try:
    if _FLAG in ("1", "true", "yes", "on"):
        raise ImportError("numba disabled by MOCKEXACT_DISABLE_NUMBA")
    from numba import njit as _njit

    HAS_NUMBA = True
except ImportError:
    HAS_NUMBA = False
    _njit = None


def njit(*args, **kwargs):
    """``numba.njit`` when available, otherwise a no-op decorator."""
    if HAS_NUMBA:
        return _njit(*args, **kwargs)
    if len(args) == 1 and callable(args[0]) and not kwargs:
        return args[0]
    return lambda fn: fn


def backend():
    return "numba" if HAS_NUMBA else "numpy"
