"""Numba switch.

Set ``BOUNDSTATE_ATLAS_NUMBA=0`` to force the pure-numpy kernels (useful for
debugging and for the benchmark's reference path).  When numba is not
importable the numpy kernels are used regardless of the flag.
"""
import os

_FLAG = os.environ.get("BOUNDSTATE_ATLAS_NUMBA", "1").strip().lower()

try:
    import numba

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    numba = None
    HAVE_NUMBA = False

USE_NUMBA = HAVE_NUMBA and _FLAG not in ("0", "false", "no", "off")


def njit(*args, **kwargs):
    """``numba.njit`` when numba is installed, identity decorator otherwise."""
    if HAVE_NUMBA:
        return numba.njit(*args, **kwargs)

    def wrap(fn):
        return fn

    if len(args) == 1 and callable(args[0]) and not kwargs:
        return args[0]
    return wrap
