"""Numba switch.

Kernels are written once in loop form and compiled with ``njit`` when numba is
importable.  Setting ``SKEWMIX_DISABLE_NUMBA=1`` routes every dispatcher to the
vectorised numpy/scipy fallback instead.  The flag is read at import time.
"""

import os

try:
    import numba

    HAVE_NUMBA = True
    # an outdated system TBB only produces a warning; try the other layers first
    numba.config.THREADING_LAYER_PRIORITY = ["omp", "workqueue", "tbb"]
except ImportError:  # pragma: no cover - exercised only without numba
    numba = None
    HAVE_NUMBA = False

_DISABLED = os.environ.get("SKEWMIX_DISABLE_NUMBA", "0").strip().lower() in {"1", "true", "yes"}
USE_NUMBA = HAVE_NUMBA and not _DISABLED


def njit(*args, **kwargs):
    """``numba.njit`` when available, identity decorator otherwise."""
    if HAVE_NUMBA:
        kwargs.setdefault("cache", True)
        return numba.njit(*args, **kwargs)
    if len(args) == 1 and callable(args[0]) and not kwargs:
        return args[0]
    return lambda f: f


prange = numba.prange if HAVE_NUMBA else range


def thread_cap(default=None):
    """Parallelism cap from ``SKEWMIX_THREADS`` (None when unset)."""
    raw = os.environ.get("SKEWMIX_THREADS")
    if raw is None:
        return default
    try:
        value = int(raw)
    except ValueError:
        return default
    return max(1, value)


def apply_thread_cap() -> None:
    """Limit numba's worker pool to ``SKEWMIX_THREADS`` when set."""
    cap = thread_cap()
    if cap is not None and HAVE_NUMBA:
        numba.set_num_threads(min(cap, numba.config.NUMBA_NUM_THREADS))
