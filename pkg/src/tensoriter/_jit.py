"""JIT selection.

Hot kernels are decorated with :func:`jit`.  When numba is importable and
``TENSORITER_DISABLE_JIT`` is unset (or ``0``), that is ``numba.njit``;
otherwise it is the identity and the very same functions run as plain
Python over numpy arrays.
"""
import os

ENV_FLAG = "TENSORITER_DISABLE_JIT"


def _disabled_by_env():
    return os.environ.get(ENV_FLAG, "").strip().lower() not in ("", "0", "false", "no")


try:
    import numba
    from numba.core.registry import CPUDispatcher
except ImportError:  # pragma: no cover - numba is a declared dependency
    numba = None
    CPUDispatcher = ()

JIT_ENABLED = numba is not None and not _disabled_by_env()


def jit(fn=None, **options):
    """``numba.njit`` when JIT is enabled, identity otherwise."""
    if fn is None:
        return lambda f: jit(f, **options)
    if JIT_ENABLED:
        return numba.njit(**options)(fn)
    return fn


def is_jitted(fn):
    return JIT_ENABLED and isinstance(fn, CPUDispatcher)
