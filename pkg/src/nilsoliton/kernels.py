"""Backend selection for the hot residual kernels.

The compiled extension is used when it imports; otherwise the numpy
fallback. Set ``NILSOLITON_PURE_PYTHON=1`` to force the fallback.
"""

import os

from . import _kernels_py

_BACKENDS = {"python": _kernels_py}

try:
    from . import _kernels as _kernels_ext
except ImportError:
    _kernels_ext = None
else:
    _BACKENDS["compiled"] = _kernels_ext

BACKEND = "python"
eq6_tensor = _kernels_py.eq6_tensor
eq6_fd_jacobian = _kernels_py.eq6_fd_jacobian


def available_backends():
    return sorted(_BACKENDS)


def set_backend(name):
    """Switch the module-level kernels; returns the previous backend name."""
    global BACKEND, eq6_tensor, eq6_fd_jacobian
    if name not in _BACKENDS:
        raise ValueError(f"backend {name!r} not available; have {available_backends()}")
    previous = BACKEND
    mod = _BACKENDS[name]
    BACKEND = name
    eq6_tensor = mod.eq6_tensor
    eq6_fd_jacobian = mod.eq6_fd_jacobian
    return previous


if _kernels_ext is not None and not os.environ.get("NILSOLITON_PURE_PYTHON"):
    set_backend("compiled")
