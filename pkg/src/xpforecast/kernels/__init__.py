"""Sampling kernels with a numba fast path and a pure-numpy fallback.

Set ``XPFORECAST_DISABLE_NUMBA=1`` to force the numpy implementation (it is
also used automatically when numba cannot be imported).
"""
import os
import types

from . import _numpy as numpy_backend

try:
    from . import _numba as numba_backend
except ImportError:  # pragma: no cover - numba is optional
    numba_backend = None

ENV_FLAG = "XPFORECAST_DISABLE_NUMBA"


def numba_disabled() -> bool:
    return os.environ.get(ENV_FLAG, "").strip().lower() not in ("", "0", "false", "no")


def get_backend(name: str | None = None) -> types.ModuleType:
    """Return the kernel module: ``"numba"``, ``"numpy"`` or None for the default."""
    if name is None:
        name = "numpy" if numba_disabled() or numba_backend is None else "numba"
    if name == "numba":
        if numba_backend is None:
            raise RuntimeError("numba backend requested but numba is not installed")
        return numba_backend
    if name == "numpy":
        return numpy_backend
    raise ValueError(f"unknown kernel backend {name!r}")


def backend_name(backend: types.ModuleType) -> str:
    return "numba" if backend is numba_backend else "numpy"
