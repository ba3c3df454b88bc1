"""Backend selection for the hot kernels.

The numba backend is used when numba imports cleanly and the environment
variable ``COUPLED_OTTO_DISABLE_NUMBA`` is unset or ``0``. Otherwise the
vectorized numpy kernels run. :func:`set_backend` switches at runtime.
"""

import os

from . import _kernels

ENV_FLAG = "COUPLED_OTTO_DISABLE_NUMBA"

try:
    import numba
except ImportError:  # pragma: no cover - numba is a declared dependency
    numba = None

_compiled = {}


def numba_available():
    return numba is not None


def _env_default():
    if numba is None:
        return "numpy"
    flag = os.environ.get(ENV_FLAG, "0").strip().lower()
    return "numpy" if flag not in ("", "0", "false", "no") else "numba"


_backend = _env_default()


def get_backend():
    return _backend


def set_backend(name):
    """Select ``"numba"`` or ``"numpy"``; returns the previous backend name."""
    global _backend
    if name not in ("numba", "numpy"):
        raise ValueError(f"unknown backend {name!r}")
    if name == "numba" and numba is None:
        raise RuntimeError("numba is not installed")
    previous, _backend = _backend, name
    return previous


def _jacobi_numba():
    fn = _compiled.get("jacobi")
    if fn is None:
        fn = numba.njit(cache=True)(_kernels.jacobi_eigh_loop)
        _compiled["jacobi"] = fn
    return fn


def jacobi_eigh(h_batch):
    """Raw (unsorted) eigen-decomposition of a C-contiguous complex batch."""
    if _backend == "numba":
        return _jacobi_numba()(h_batch)
    return _kernels.jacobi_eigh_vectorized(h_batch)
