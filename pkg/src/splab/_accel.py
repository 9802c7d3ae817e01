"""Numba switch.

Kernels in :mod:`splab.kernels` are compiled with ``numba.njit`` unless the
environment variable ``SPLAB_DISABLE_NUMBA`` is set to a truthy value, or
numba cannot be imported. In that case the pure-numpy fallbacks are used.
"""

import os

_FALSY = {"", "0", "false", "no", "off"}


def _numba_requested() -> bool:
    return os.environ.get("SPLAB_DISABLE_NUMBA", "").strip().lower() in _FALSY


try:
    import numba as _numba
except ImportError:  # pragma: no cover - numba is a declared dependency
    _numba = None

USE_NUMBA = _numba is not None and _numba_requested()


def njit(*args, **kwargs):
    """``numba.njit`` with cache/nogil defaults; identity when numba is absent."""
    kwargs.setdefault("cache", True)
    kwargs.setdefault("nogil", True)
    if _numba is None:
        if args and callable(args[0]):
            return args[0]
        return lambda fn: fn
    return _numba.njit(*args, **kwargs)
