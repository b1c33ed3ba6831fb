"""Numba acceleration toggle for the hot window-processing kernels.

The spectral kernels run through numba @njit when available. Setting
VOLSAL_BACKEND=numpy forces the pure-numpy path; VOLSAL_BACKEND=numba
requires numba and fails loudly if it is missing; the default (auto)
picks numba when importable. Both paths are deterministic for a fixed
backend, independent of thread count and chunking.
"""

import os
from contextlib import contextmanager

from .errors import ConfigError

BACKEND_ENV = "VOLSAL_BACKEND"

try:
    import numba
    from numba import njit, prange

    HAS_NUMBA = True
except ImportError:  # pragma: no cover - exercised via VOLSAL_BACKEND=numpy
    numba = None
    HAS_NUMBA = False
    prange = range

    def njit(*args, **kwargs):
        # Decorator shim so kernel definitions import cleanly without numba.
        def wrap(fn):
            return fn

        if args and callable(args[0]):
            return args[0]
        return wrap


def default_backend() -> str:
    """Backend implied by the environment: 'numba' or 'numpy'."""
    value = os.environ.get(BACKEND_ENV, "auto").strip().lower()
    if value in ("", "auto"):
        return "numba" if HAS_NUMBA else "numpy"
    if value in ("numba", "numpy"):
        return value
    raise ConfigError(f"invalid {BACKEND_ENV}={value!r} (expected auto, numba, or numpy)")


def resolve_backend(requested: str | None = None) -> str:
    """Validate an explicit backend choice, falling back to the env default."""
    name = default_backend() if requested in (None, "", "auto") else str(requested).lower()
    if name not in ("numba", "numpy"):
        raise ConfigError(f"unknown backend {requested!r}")
    if name == "numba" and not HAS_NUMBA:
        raise ConfigError("numba backend requested but numba is not installed")
    return name


def max_threads() -> int:
    if HAS_NUMBA:
        return int(numba.config.NUMBA_NUM_THREADS)
    return os.cpu_count() or 1


@contextmanager
def thread_count(n: int | None):
    """Temporarily pin the numba thread pool; no-op for the numpy path."""
    if n is not None and n < 1:
        raise ConfigError(f"thread count must be >= 1, got {n}")
    if n is None or not HAS_NUMBA:
        yield
        return
    previous = numba.get_num_threads()
    numba.set_num_threads(min(n, max_threads()))
    try:
        yield
    finally:
        numba.set_num_threads(previous)
