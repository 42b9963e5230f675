"""Backend selection for the numerical kernels.

Two implementations of every hot kernel exist: a numba-compiled one and a
plain-numpy one.  The active backend is chosen once at import time from the
CCASIM_BACKEND environment variable ("numba" | "numpy", default "numba" when
numba is importable) but both remain callable, which is what the benchmark
uses.  Nothing else in the package should import numba directly.
"""

import os
import logging

log = logging.getLogger(__name__)

try:
    import numba
    from numba import njit

    HAS_NUMBA = True
except ImportError:  # pragma: no cover - numba is a hard dep, but be graceful
    numba = None
    HAS_NUMBA = False

    def njit(*args, **kwargs):
        # transparent no-op decorator so kernel modules import cleanly
        if args and callable(args[0]):
            return args[0]

        def wrap(f):
            return f

        return wrap


_requested = os.environ.get("CCASIM_BACKEND", "numba").strip().lower()
if _requested not in ("numba", "numpy"):
    raise ValueError(
        f"CCASIM_BACKEND must be 'numba' or 'numpy', got {_requested!r}"
    )

USE_NUMBA = HAS_NUMBA and _requested == "numba"
if _requested == "numba" and not HAS_NUMBA:
    log.warning("numba not importable; falling back to numpy kernels")


def active_backend() -> str:
    """Name of the backend the package-level kernel dispatch uses."""
    return "numba" if USE_NUMBA else "numpy"
