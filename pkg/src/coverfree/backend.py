"""Kernel backend selection: compiled extension if available, else pure Python.

Set COVERFREE_BACKEND=py to force the pure-Python kernels, or
COVERFREE_BACKEND=c to require the compiled extension (ImportError if it was
not built).  Both backends implement identical algorithms and produce
bit-identical results; `tests/test_backends.py` enforces that.
"""

from __future__ import annotations

import os

from . import _kernels_py

BACKEND_ENV_VAR = "COVERFREE_BACKEND"


def _load():
    choice = os.environ.get(BACKEND_ENV_VAR, "auto").lower()
    if choice in ("py", "python"):
        return _kernels_py
    try:
        from . import _kernels  # compiled extension

        return _kernels
    except ImportError:
        if choice == "c":
            raise
        return _kernels_py


kernels = _load()
BACKEND: str = kernels.BACKEND


def available_backends() -> dict[str, object]:
    """All importable kernel backends, keyed by name."""
    out: dict[str, object] = {"python": _kernels_py}
    try:
        from . import _kernels

        out["c"] = _kernels
    except ImportError:
        pass
    return out
