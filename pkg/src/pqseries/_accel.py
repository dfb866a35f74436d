"""Optional numba acceleration.

Kernels in :mod:`pqseries._kernels` are written once as plain Python loops.
When numba is importable and ``PQSERIES_DISABLE_NUMBA`` is unset (or ``0``),
the top-level kernels are compiled with ``numba.njit``; otherwise the same
source runs in the interpreter.
"""

import os

try:
    import numba
except ImportError:  # pragma: no cover - numba is an optional speedup
    numba = None

ENV_FLAG = "PQSERIES_DISABLE_NUMBA"

NUMBA_AVAILABLE = numba is not None
USE_NUMBA = NUMBA_AVAILABLE and os.environ.get(ENV_FLAG, "").strip() in ("", "0")


def jitable(fn):
    """Mark a helper as callable from both compiled and interpreted kernels."""
    if NUMBA_AVAILABLE:
        from numba.extending import register_jitable

        return register_jitable(fn)
    return fn


def compile_kernel(fn):
    """Return the njit-compiled kernel, or ``fn`` itself when numba is off."""
    if USE_NUMBA:
        return numba.njit(cache=True)(fn)
    return fn


def backend() -> str:
    return "numba" if USE_NUMBA else "python"
