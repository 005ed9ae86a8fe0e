"""Selects the compiled (numba) or pure-numpy kernel path.

Set ``PROBALG_DISABLE_NUMBA=1`` to force the numpy fallback, e.g. when numba
is not installed or to compare both paths.
"""
import os

_DISABLED = os.environ.get("PROBALG_DISABLE_NUMBA", "").strip().lower() in {"1", "true", "yes"}

try:
    if _DISABLED:
        raise ImportError
    from numba import njit

    HAS_NUMBA = True
except ImportError:
    HAS_NUMBA = False

    def njit(*args, **kwargs):
        if len(args) == 1 and callable(args[0]) and not kwargs:
            return args[0]

        def decorator(func):
            return func

        return decorator


def numba_enabled():
    return HAS_NUMBA
