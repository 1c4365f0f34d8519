"""Backend selection for the hot kernels.

Numba compiles the scalar and batch kernels when available.  Setting
``QOTTO_DISABLE_NUMBA=1`` (or numba's own ``NUMBA_DISABLE_JIT=1``) routes every
public entry point through the pure-numpy implementations instead.
"""

import os

_FALSY = {"", "0", "false", "no", "off"}


def _flag(name):
    return os.environ.get(name, "").strip().lower() not in _FALSY


try:
    import numba

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is a hard dependency in CI
    numba = None
    HAVE_NUMBA = False

NUMBA_ENABLED = HAVE_NUMBA and not (_flag("QOTTO_DISABLE_NUMBA") or _flag("NUMBA_DISABLE_JIT"))
BACKEND = "numba" if NUMBA_ENABLED else "numpy"


def jit(func):
    """``numba.njit(cache=True, nogil=True)`` when enabled, identity otherwise."""
    if NUMBA_ENABLED:
        return numba.njit(cache=True, nogil=True)(func)
    return func
