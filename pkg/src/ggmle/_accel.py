"""Numba availability switch.

Kernels in :mod:`ggmle._kernels` come in two flavours: a loop version that is
compiled with ``numba.njit`` and a vectorised pure-numpy version.  The compiled
one is used when numba imports cleanly and ``GGMLE_DISABLE_NUMBA`` is unset
(or set to ``0``).  The flag is read once, at import.
"""
from __future__ import annotations

import os

ENV_FLAG = "GGMLE_DISABLE_NUMBA"

try:
    import numba

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is a hard dependency in CI
    numba = None
    HAVE_NUMBA = False


def _flag_set(value: str | None) -> bool:
    return (value or "").strip().lower() not in ("", "0", "false", "no", "off")


USE_NUMBA = HAVE_NUMBA and not _flag_set(os.environ.get(ENV_FLAG))


def njit(func):
    """Compile ``func`` in nopython mode, or hand it back untouched."""
    if not HAVE_NUMBA:
        return func
    return numba.njit(cache=True, nogil=True)(func)


def backend() -> str:
    return "numba" if USE_NUMBA else "numpy"
