"""Backend selection for the numerical kernels.

The compiled extension is used when it was built; otherwise the pure-Python
versions are used. Set ``GROUPWALK_PURE_PYTHON=1`` to force the fallback.
"""

import os

from . import _pykernels

if os.environ.get("GROUPWALK_PURE_PYTHON", "") not in ("", "0"):
    _impl = _pykernels
else:
    try:
        from . import _ckernels as _impl
    except ImportError:
        _impl = _pykernels

BACKEND = _impl.BACKEND
jacobi_eigh = _impl.jacobi_eigh
expected_mutual_info = _impl.expected_mutual_info
lloyd = _impl.lloyd


def available_backends():
    """Return ``{name: module}`` for every importable kernel backend."""
    found = {"python": _pykernels}
    try:
        from . import _ckernels
    except ImportError:
        pass
    else:
        found["cython"] = _ckernels
    return found
