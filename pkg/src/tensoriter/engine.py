"""Broadcast combinators over dimension-specialized loop kernels.

For each combinator there is a *family* of kernels, one per dimension
1..MAX_DIMENSION, generated from source with the dimension as a constant
(see :mod:`tensoriter.codegen`).  A call validates shapes once, then
:func:`dispatch_dimension` walks the family and runs the kernel whose
constant equals the runtime dimension.

Callbacks receive element *values*.  Where a combinator allows writes, the
callback returns the new value(s) instead of assigning through a reference:

* ``apply``: ``f(dest, *sources) -> new dest``
* ``modify``: ``f(*values) -> new value`` for one tensor, or a tuple with one
  new value per tensor
* ``enumerate_for_each``: ``f(counter, dimension, *values)`` where
  ``counter`` is an immutable tuple

Numba freezes captured variables, so mutable external state is passed
explicitly: with ``state=obj`` the callback is called as ``f(obj, ...)``.

A numba-compiled callback runs inside a compiled kernel.  Any other callable
runs in the plain-Python build of the same generated kernel.
"""
from __future__ import annotations

import functools
from typing import Callable, Sequence

import numpy as np

from . import codegen
from ._jit import JIT_ENABLED, is_jitted
from .core import INDEX_DTYPE, Tensor, TensorView, as_shape, check_bounds

MAX_DIMENSION = 8
MAX_DIMENSION_LIMIT = 32


class UnsupportedDimension(ValueError):
    def __init__(self, dimension, max_dimension=MAX_DIMENSION):
        super().__init__(f"dimension {dimension} outside supported range 1..{max_dimension}")
        self.dimension = dimension


def make_family(factory: Callable[[int], Callable], max_dimension: int = MAX_DIMENSION):
    """``((1, factory(1)), ..., (max_dimension, factory(max_dimension)))``."""
    if not 1 <= max_dimension <= MAX_DIMENSION_LIMIT:
        raise ValueError(f"max_dimension must be in 1..{MAX_DIMENSION_LIMIT}")
    return tuple((d, factory(d)) for d in range(1, max_dimension + 1))


def dispatch_dimension(dimension: int, family, *args):
    """Run the worker of ``family`` generated for ``dimension``.

    ``family`` is an ascending sequence of ``(constant, worker)`` pairs; the
    search is a linear chain of comparisons.
    """
    for constant, worker in family:
        if dimension == constant:
            return worker(*args)
    raise UnsupportedDimension(dimension, family[-1][0] if family else 0)


@functools.lru_cache(maxsize=None)
def kernel_family(mode: str, arity: int, stateful: bool, use_jit: bool, max_dimension: int = MAX_DIMENSION):
    return make_family(
        lambda d: codegen.build_kernel(mode, d, arity, stateful, use_jit), max_dimension
    )


def kernel(mode: str, dimension: int, arity: int, *, stateful: bool = False, use_jit: bool = JIT_ENABLED):
    """The raw generated kernel, for calling from inside other kernels.

    No bounds checking; the caller passes ``(shape, f, [state,] buf0, layout0,
    ...)`` itself.
    """
    family = kernel_family(mode, arity, stateful, use_jit)
    if not 1 <= dimension <= len(family):
        raise UnsupportedDimension(dimension)
    return family[dimension - 1][1]


def _run(mode: str, shape: Sequence[int], f, tensors, state):
    if not tensors:
        raise TypeError(f"{mode} needs at least one tensor")
    shape = as_shape(shape)
    for t in tensors:
        if not isinstance(t, (Tensor, TensorView)):
            raise TypeError(f"expected Tensor or TensorView, got {type(t).__name__}")
    check_bounds(shape, [t.shape for t in tensors])
    use_jit = is_jitted(f)
    family = kernel_family(mode, len(tensors), state is not None, use_jit)
    args = [np.array(shape, dtype=INDEX_DTYPE) if use_jit else shape, f]
    if state is not None:
        args.append(state)
    for t in tensors:
        args.extend(t._operand(use_jit))
    dispatch_dimension(len(shape), family, *args)


def for_each(shape, f, *tensors, state=None) -> None:
    """Call ``f`` with one element from each tensor at every tuple of
    ``shape``, in lexicographic order.  Tensors are not modified."""
    _run("for_each", shape, f, tensors, state)


def apply(shape, f, dest, *sources, state=None) -> None:
    """Like :func:`for_each`, but ``dest[t]`` is replaced by ``f``'s return
    value.  Sources are read only."""
    _run("apply", shape, f, (dest, *sources), state)


def modify(shape, f, *tensors, state=None) -> None:
    """Like :func:`apply`, but every tensor is written back from ``f``'s
    return (a scalar for one tensor, a tuple otherwise)."""
    _run("modify", shape, f, tensors, state)


def enumerate_for_each(shape, f, *tensors, state=None) -> None:
    """Like :func:`for_each`, with the current index tuple and the dimension
    passed ahead of the element values."""
    _run("enumerate", shape, f, tensors, state)
