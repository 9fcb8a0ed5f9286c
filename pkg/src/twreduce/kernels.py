"""Kernel backend selection.

The compiled extension is used when it imports; ``TWREDUCE_KERNEL=python``
forces the pure-Python fallback.
"""

import os

from . import _kernels_py

if os.environ.get("TWREDUCE_KERNEL", "").lower() == "python":
    _impl = _kernels_py
else:
    try:
        from . import _kernels as _impl
    except ImportError:
        _impl = _kernels_py

BACKEND = "python" if _impl is _kernels_py else "cython"
row_basis = _impl.row_basis
cut_basis = _impl.cut_basis


def backends():
    """All importable backends, keyed by name."""
    out = {"python": _kernels_py}
    try:
        from . import _kernels
    except ImportError:
        pass
    else:
        out["cython"] = _kernels
    return out
