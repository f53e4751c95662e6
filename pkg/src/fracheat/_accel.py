"""Optional numba acceleration.

Hot loops live in :mod:`fracheat._kernels` in two flavours: an ``@njit`` loop
and a vectorised numpy fallback. Which one is exported is decided once, at
import time:

* ``FRACHEAT_DISABLE_NUMBA=1`` forces the numpy path;
* otherwise numba is used when it can be imported.
"""

import os

_TRUTHY = {"1", "true", "yes", "on"}


def _numba_requested():
    return os.environ.get("FRACHEAT_DISABLE_NUMBA", "").strip().lower() not in _TRUTHY


try:  # pragma: no cover - depends on environment
    import numba

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover
    numba = None
    HAVE_NUMBA = False

USE_NUMBA = HAVE_NUMBA and _numba_requested()


def njit(func):
    """``numba.njit(cache=True)`` when numba is available, identity otherwise.

    fastmath stays off so that results are bit-reproducible between runs.
    """
    if not HAVE_NUMBA:
        return func
    return numba.njit(cache=True)(func)


def backend_name():
    return "numba" if USE_NUMBA else "numpy"
