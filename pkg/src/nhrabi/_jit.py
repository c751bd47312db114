"""Backend selection for the compiled kernels.

``NHRABI_BACKEND=numba`` (default) compiles hot loops with ``numba.njit``;
``NHRABI_BACKEND=numpy`` runs the same functions as plain Python/numpy.
The flag is read once at import time.
"""
from __future__ import annotations

import os

_requested = os.environ.get("NHRABI_BACKEND", "numba").strip().lower()
if _requested not in ("numba", "numpy"):
    raise ImportError(f"NHRABI_BACKEND must be 'numba' or 'numpy', got {_requested!r}")

HAVE_NUMBA = False
if _requested == "numba":
    try:
        import numba

        HAVE_NUMBA = True
    except ImportError:  # pragma: no cover - depends on environment
        pass

BACKEND = "numba" if HAVE_NUMBA else "numpy"


def _noop_jit(*args, **kwargs):
    if len(args) == 1 and callable(args[0]) and not kwargs:
        return args[0]

    def wrap(f):
        return f

    return wrap


if HAVE_NUMBA:
    njit = numba.njit
else:
    njit = _noop_jit


def is_compiled(func) -> bool:
    """True if ``func`` is a numba dispatcher usable from nopython code."""
    if not HAVE_NUMBA:
        return False
    from numba.core.registry import CPUDispatcher

    return isinstance(func, CPUDispatcher)
