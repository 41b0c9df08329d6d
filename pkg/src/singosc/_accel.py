"""Optional numba acceleration.

Hot kernels are written once as plain Python/numpy and decorated with
:func:`njit`.  When numba is importable and ``SINGOSC_DISABLE_JIT`` is not
set to a truthy value, they are compiled; otherwise the decorator is the
identity and the same code runs under the interpreter.
"""

import os

_FLAG = os.environ.get("SINGOSC_DISABLE_JIT", "").strip().lower()
_DISABLED = _FLAG not in ("", "0", "false", "no")

try:
    if _DISABLED:
        raise ImportError
    import numba as _numba
except ImportError:  # pragma: no cover - exercised with the env flag
    _numba = None

JIT_ENABLED = _numba is not None


def njit(func=None, **kwargs):
    """``numba.njit(cache=True)`` when available, identity otherwise."""
    if func is None:
        return lambda f: njit(f, **kwargs)
    if not JIT_ENABLED:
        return func
    kwargs.setdefault("cache", True)
    return _numba.njit(**kwargs)(func)


def python_impl(func):
    """Return the uncompiled Python function behind a kernel."""
    return getattr(func, "py_func", func)
