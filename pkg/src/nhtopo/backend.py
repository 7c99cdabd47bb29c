"""Select the kernel implementation at import time.

The compiled extension is optional: if it failed to build (or the
NHTOPO_PURE environment variable is set to a truthy value), the pure-NumPy
fallback is used instead.  Both expose the same three functions.
"""

import os

from . import _kernels_py

_force_pure = os.environ.get("NHTOPO_PURE", "").strip().lower() in {"1", "true", "yes", "on"}

_NAMES = ("dyson_iterate", "dyson_converge", "pfaffian_skew")

if _force_pure:
    _impl = _kernels_py
    BACKEND = "python"
else:
    try:
        from . import _kernels_cy as _impl  # type: ignore[attr-defined]

        if not all(hasattr(_impl, name) for name in _NAMES):
            raise ImportError("compiled kernel module is incomplete")
        BACKEND = "compiled"
    except ImportError:
        _impl = _kernels_py
        BACKEND = "python"

dyson_iterate = _impl.dyson_iterate
dyson_converge = _impl.dyson_converge
pfaffian_skew = _impl.pfaffian_skew
