"""Hot-loop kernels: compiled (Cython) core with a pure-Python fallback.

The backend is chosen once at import time.  Set ``TREESPECTRA_PURE=1`` in the
environment to force the fallback; ``BACKEND`` reports which implementation
is active.  Both backends implement the same call contracts and, by design,
the same floating-point operation order, so their outputs agree bit for bit
(the extension is compiled with floating-point contraction disabled).
"""

import os

from . import pure as _pure

_forced_pure = os.environ.get("TREESPECTRA_PURE", "") not in ("", "0")

if _forced_pure:
    _impl = _pure
    BACKEND = "pure"
else:
    try:
        from . import _core as _impl  # type: ignore[no-redef]

        BACKEND = "cython"
    except ImportError:
        _impl = _pure
        BACKEND = "pure"

jacobi_sweep = _impl.jacobi_sweep
interchange_run = _impl.interchange_run


def implementations():
    """Available kernel modules keyed by backend name (for benchmarks/tests)."""
    impls = {"pure": _pure}
    try:
        from . import _core

        impls["cython"] = _core
    except ImportError:
        pass
    return impls


__all__ = ["BACKEND", "jacobi_sweep", "interchange_run", "implementations"]
