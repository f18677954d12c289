"""Kernel backend selection.

The compiled kernels are used when the extension imports; otherwise, or when
``NUMRANGE_PURE_PYTHON`` is set to a non-empty value other than ``0``, the
pure-Python reference kernels are used.
"""

from __future__ import annotations

import os

from . import _purepy

_forced = os.environ.get("NUMRANGE_PURE_PYTHON", "") not in ("", "0")

if _forced:
    kernels = _purepy
    NAME = "python"
else:
    try:
        from . import _kernels as kernels
    except ImportError:
        kernels = _purepy
        NAME = "python"
    else:
        NAME = "compiled"


def available() -> dict:
    """Return ``{name: module}`` for every importable backend."""
    found = {"python": _purepy}
    try:
        from . import _kernels
    except ImportError:
        pass
    else:
        found["compiled"] = _kernels
    return found
