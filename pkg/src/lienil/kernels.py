"""Backend selection for the GF(p) row-reduction kernel.

The compiled Cython kernel is used when it was built; otherwise the numpy
implementation in :mod:`lienil._rref_py` is used. Setting the environment
variable ``LIENIL_PURE_PYTHON=1`` forces the fallback.
"""

from __future__ import annotations

import os

from lienil import _rref_py

python_rref_mod_p = _rref_py.rref_mod_p

try:
    if os.environ.get("LIENIL_PURE_PYTHON", "") not in ("", "0"):
        raise ImportError("pure Python backend requested")
    from lienil._rref_ext import rref_mod_p as compiled_rref_mod_p
except ImportError:
    compiled_rref_mod_p = None

if compiled_rref_mod_p is not None:
    rref_mod_p = compiled_rref_mod_p
    BACKEND = "cython"
else:
    rref_mod_p = python_rref_mod_p
    BACKEND = "python"

__all__ = ["BACKEND", "rref_mod_p", "python_rref_mod_p", "compiled_rref_mod_p"]
