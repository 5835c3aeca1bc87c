"""Task bodies for the four benchmarks, written on the broadcast combinators,
plus convolution by plain tuple iteration for comparison.

All accumulations run in lexicographic tuple order, so every iteration
strategy produces bit-identical float results.
"""
from __future__ import annotations

import numpy as np

from . import engine
from ._jit import JIT_ENABLED, jit
from .core import (
    INDEX_DTYPE,
    DimensionMismatch,
    ShapeError,
    Tensor,
    _advance_tuple,
    _tuple_to_index,
    check_bounds,
)


@jit
def _assign(dest, src):
    return src


@jit
def _accumulate_product(acc, x, y):
    acc[0] += x * y


@jit
def _fused(x, y, z):
    return x + y * x - z


def copy_embedded(dest, src) -> None:
    """``dest[t] = src[t]`` for every tuple of ``dest.shape``."""
    check_bounds(dest.shape, [src.shape])
    engine.apply(dest.shape, _assign, dest, src)


def inner_product_shared(x, y, shape) -> float:
    """Sum of ``x[t] * y[t]`` over the tuples of ``shape``."""
    acc = np.zeros(1)
    engine.for_each(shape, _accumulate_product, x, y, state=acc)
    return float(acc[0])


def fused_update(x, y, z) -> None:
    """``x[t] = x[t] + y[t] * x[t] - z[t]`` over ``x.shape``, in place."""
    engine.apply(x.shape, _fused, x, y, z)


def _convolution_result(lhs, rhs) -> Tensor:
    if lhs.dimension != rhs.dimension:
        raise DimensionMismatch(
            f"cannot convolve {lhs.dimension}-d with {rhs.dimension}-d tensor", tensor=1
        )
    if 0 in lhs.shape or 0 in rhs.shape:
        raise ShapeError("convolution operands need every axis >= 1")
    return Tensor(tuple(a + b - 1 for a, b in zip(lhs.shape, rhs.shape)))


@jit(cache=True)
def _convolve_tuples(lhs, lhs_shape, rhs, rhs_shape, result, result_shape):
    dimension = lhs_shape.shape[0]
    counter_lhs = np.zeros(dimension, dtype=np.uint64)
    counter_rhs = np.zeros(dimension, dtype=np.uint64)
    counter_result = np.zeros(dimension, dtype=np.uint64)
    for i in range(lhs.shape[0]):
        counter_rhs[:] = 0
        for j in range(rhs.shape[0]):
            for k in range(dimension):
                counter_result[k] = counter_lhs[k] + counter_rhs[k]
            lhs_flat = _tuple_to_index(counter_lhs, lhs_shape, dimension)
            rhs_flat = _tuple_to_index(counter_rhs, rhs_shape, dimension)
            result_flat = _tuple_to_index(counter_result, result_shape, dimension)
            result[result_flat] += lhs[lhs_flat] * rhs[rhs_flat]
            _advance_tuple(counter_rhs, rhs_shape, dimension)
        _advance_tuple(counter_lhs, lhs_shape, dimension)


def convolve_tuple_iteration(lhs: Tensor, rhs: Tensor) -> Tensor:
    """Full convolution by walking both operands with the odometer."""
    result = _convolution_result(lhs, rhs)
    lhs, rhs = _contiguous(lhs), _contiguous(rhs)
    _convolve_tuples(
        lhs.flat,
        np.array(lhs.shape, dtype=INDEX_DTYPE),
        rhs.flat,
        np.array(rhs.shape, dtype=INDEX_DTYPE),
        result.flat,
        np.array(result.shape, dtype=INDEX_DTYPE),
    )
    return result


@jit
def _convolve_inner(state, counter_rhs, dimension, rhs_value):
    result, result_shape, counter_result, counter_lhs, lhs_value = state
    for i in range(dimension):
        counter_result[i] = counter_lhs[i] + counter_rhs[i]
    result[_tuple_to_index(counter_result, result_shape, dimension)] += lhs_value * rhs_value


@jit
def _convolve_outer(state, counter_lhs, dimension, lhs_value):
    inner, rhs_iter, rhs, rhs_layout, result, result_shape, counter_result = state
    inner(
        rhs_iter,
        _convolve_inner,
        (result, result_shape, counter_result, counter_lhs, lhs_value),
        rhs,
        rhs_layout,
    )


def convolve_triot(lhs, rhs) -> Tensor:
    """Full convolution as two nested index-tuple enumerations.

    The outer enumeration walks ``lhs``; for each element the inner one
    walks ``rhs`` and scatters products into ``result``.  Both operands share
    one dimension, so the inner kernel is selected once up front and called
    directly from the outer callback.
    """
    result = _convolution_result(lhs, rhs)
    use_jit = JIT_ENABLED
    inner = engine.kernel("enumerate", rhs.dimension, 1, stateful=True, use_jit=use_jit)
    rhs_buf, rhs_layout = rhs._operand(use_jit)
    result_shape = np.array(result.shape, dtype=INDEX_DTYPE)
    state = (
        inner,
        np.array(rhs.shape, dtype=INDEX_DTYPE) if use_jit else rhs.shape,
        rhs_buf,
        rhs_layout,
        result.flat,
        result_shape,
        np.zeros(result.dimension, dtype=INDEX_DTYPE),
    )
    engine.enumerate_for_each(lhs.shape, _convolve_outer, lhs, state=state)
    return result


def _contiguous(t) -> Tensor:
    return t if isinstance(t, Tensor) else t.materialize()
