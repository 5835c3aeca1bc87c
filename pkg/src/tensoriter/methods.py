"""Competing iteration strategies for benchmarks 1-3.

Each benchmark task has one entry per method.  Apart from ``triot`` (which
goes through the public combinators) these are baselines: they may walk
the first tensor by flat index, because lexicographic tuple order is its
storage order.  Hard-coded loops exist only for the dimensions the
benchmarks use (3 for benchmarks 1 and 2, 4 for benchmark 3).
"""
from __future__ import annotations

import numpy as np

from . import reference
from ._jit import jit
from .core import (
    INDEX_DTYPE,
    LogShape,
    _advance_tuple,
    _reindex,
    _reindex_powers_of_2,
    _tuple_to_index,
    advance_tuple_fixed,
    tuple_to_index_fixed,
)

METHODS = (
    "triot",
    "tuple-iteration",
    "tuple-iteration-fixed-dim",
    "integer-reindex",
    "integer-reindex-pow2",
    "hard-coded-loops",
)
HARD_CODED_DIMENSIONS = {1: 3, 2: 3, 3: 4}


def _layout(t):
    return np.array(t.shape, dtype=INDEX_DTYPE)


def _logs(t):
    return np.array(LogShape.from_shape(t.shape).log_axes, dtype=INDEX_DTYPE)


# -- benchmark 1: x[t] = y[t] over x.shape ------------------------------------


@jit(cache=True)
def _copy_tuple(x, xs, y, ys):
    d = xs.shape[0]
    t = np.zeros(d, dtype=np.uint64)
    for k in range(x.shape[0]):
        x[k] = y[_tuple_to_index(t, ys, d)]
        _advance_tuple(t, xs, d)


@jit
def _copy_tuple_fixed(x, xs, y, ys, advance, linearize):
    t = np.zeros(xs.shape[0], dtype=np.uint64)
    for k in range(x.shape[0]):
        x[k] = y[linearize(t, ys)]
        advance(t, xs)


@jit(cache=True)
def _copy_reindex(x, xs, y, ys):
    d = xs.shape[0]
    for k in range(np.uint64(x.shape[0])):
        x[k] = y[_reindex(k, xs, ys, d)]


@jit(cache=True)
def _copy_reindex_pow2(x, xlog, y, ylog):
    d = xlog.shape[0]
    for k in range(np.uint64(x.shape[0])):
        x[k] = y[_reindex_powers_of_2(k, xlog, ylog, d)]


@jit(cache=True)
def _copy_hard3(x, xs, y, ys):
    for k in range(xs[0]):
        for j in range(xs[1]):
            x_bias = (k * xs[1] + j) * xs[2]
            y_bias = (k * ys[1] + j) * ys[2]
            for i in range(xs[2]):
                x[x_bias + i] = y[y_bias + i]


def copy_methods():
    def tuple_fixed(x, y):
        d = x.dimension
        _copy_tuple_fixed(x.flat, _layout(x), y.flat, _layout(y), advance_tuple_fixed(d), tuple_to_index_fixed(d))

    return {
        "triot": reference.copy_embedded,
        "tuple-iteration": lambda x, y: _copy_tuple(x.flat, _layout(x), y.flat, _layout(y)),
        "tuple-iteration-fixed-dim": tuple_fixed,
        "integer-reindex": lambda x, y: _copy_reindex(x.flat, _layout(x), y.flat, _layout(y)),
        "integer-reindex-pow2": lambda x, y: _copy_reindex_pow2(x.flat, _logs(x), y.flat, _logs(y)),
        "hard-coded-loops": lambda x, y: _copy_hard3(x.flat, _layout(x), y.flat, _layout(y)),
    }


# -- benchmark 2: sum of x[t] * y[t] over x.shape --------------------------------


@jit(cache=True)
def _dot_tuple(x, xs, y, ys):
    d = xs.shape[0]
    t = np.zeros(d, dtype=np.uint64)
    tot = 0.0
    for k in range(x.shape[0]):
        tot += x[k] * y[_tuple_to_index(t, ys, d)]
        _advance_tuple(t, xs, d)
    return tot


@jit
def _dot_tuple_fixed(x, xs, y, ys, advance, linearize):
    t = np.zeros(xs.shape[0], dtype=np.uint64)
    tot = 0.0
    for k in range(x.shape[0]):
        tot += x[k] * y[linearize(t, ys)]
        advance(t, xs)
    return tot


@jit(cache=True)
def _dot_reindex(x, xs, y, ys):
    d = xs.shape[0]
    tot = 0.0
    for k in range(np.uint64(x.shape[0])):
        tot += x[k] * y[_reindex(k, xs, ys, d)]
    return tot


@jit(cache=True)
def _dot_reindex_pow2(x, xlog, y, ylog):
    d = xlog.shape[0]
    tot = 0.0
    for k in range(np.uint64(x.shape[0])):
        tot += x[k] * y[_reindex_powers_of_2(k, xlog, ylog, d)]
    return tot


@jit(cache=True)
def _dot_hard3(x, xs, y, ys):
    tot = 0.0
    for k in range(xs[0]):
        for j in range(xs[1]):
            x_bias = (k * xs[1] + j) * xs[2]
            y_bias = (k * ys[1] + j) * ys[2]
            for i in range(xs[2]):
                tot += x[x_bias + i] * y[y_bias + i]
    return tot


def dot_methods():
    def tuple_fixed(x, y):
        d = x.dimension
        return _dot_tuple_fixed(
            x.flat, _layout(x), y.flat, _layout(y), advance_tuple_fixed(d), tuple_to_index_fixed(d)
        )

    return {
        "triot": lambda x, y: reference.inner_product_shared(x, y, x.shape),
        "tuple-iteration": lambda x, y: _dot_tuple(x.flat, _layout(x), y.flat, _layout(y)),
        "tuple-iteration-fixed-dim": tuple_fixed,
        "integer-reindex": lambda x, y: _dot_reindex(x.flat, _layout(x), y.flat, _layout(y)),
        "integer-reindex-pow2": lambda x, y: _dot_reindex_pow2(x.flat, _logs(x), y.flat, _logs(y)),
        "hard-coded-loops": lambda x, y: _dot_hard3(x.flat, _layout(x), y.flat, _layout(y)),
    }


# -- benchmark 3: x[t] = x[t] + y[t] * x[t] - z[t] over x.shape --------------------


@jit(cache=True)
def _fused_tuple(x, xs, y, ys, z, zs):
    d = xs.shape[0]
    t = np.zeros(d, dtype=np.uint64)
    for k in range(x.shape[0]):
        xv = x[k]
        x[k] = xv + y[_tuple_to_index(t, ys, d)] * xv - z[_tuple_to_index(t, zs, d)]
        _advance_tuple(t, xs, d)


@jit
def _fused_tuple_fixed(x, xs, y, ys, z, zs, advance, linearize):
    t = np.zeros(xs.shape[0], dtype=np.uint64)
    for k in range(x.shape[0]):
        xv = x[k]
        x[k] = xv + y[linearize(t, ys)] * xv - z[linearize(t, zs)]
        advance(t, xs)


@jit(cache=True)
def _fused_reindex(x, xs, y, ys, z, zs):
    d = xs.shape[0]
    for k in range(np.uint64(x.shape[0])):
        xv = x[k]
        x[k] = xv + y[_reindex(k, xs, ys, d)] * xv - z[_reindex(k, xs, zs, d)]


@jit(cache=True)
def _fused_reindex_pow2(x, xlog, y, ylog, z, zlog):
    d = xlog.shape[0]
    for k in range(np.uint64(x.shape[0])):
        xv = x[k]
        x[k] = (
            xv
            + y[_reindex_powers_of_2(k, xlog, ylog, d)] * xv
            - z[_reindex_powers_of_2(k, xlog, zlog, d)]
        )


@jit(cache=True)
def _fused_hard4(x, xs, y, ys, z, zs):
    for a in range(xs[0]):
        for b in range(xs[1]):
            for c in range(xs[2]):
                x_bias = ((a * xs[1] + b) * xs[2] + c) * xs[3]
                y_bias = ((a * ys[1] + b) * ys[2] + c) * ys[3]
                z_bias = ((a * zs[1] + b) * zs[2] + c) * zs[3]
                for i in range(xs[3]):
                    xv = x[x_bias + i]
                    x[x_bias + i] = xv + y[y_bias + i] * xv - z[z_bias + i]


def fused_methods():
    def tuple_fixed(x, y, z):
        d = x.dimension
        _fused_tuple_fixed(
            x.flat, _layout(x), y.flat, _layout(y), z.flat, _layout(z),
            advance_tuple_fixed(d), tuple_to_index_fixed(d),
        )

    def flat_args(x, y, z, shape_of=_layout):
        return x.flat, shape_of(x), y.flat, shape_of(y), z.flat, shape_of(z)

    return {
        "triot": reference.fused_update,
        "tuple-iteration": lambda x, y, z: _fused_tuple(*flat_args(x, y, z)),
        "tuple-iteration-fixed-dim": tuple_fixed,
        "integer-reindex": lambda x, y, z: _fused_reindex(*flat_args(x, y, z)),
        "integer-reindex-pow2": lambda x, y, z: _fused_reindex_pow2(*flat_args(x, y, z, _logs)),
        "hard-coded-loops": lambda x, y, z: _fused_hard4(*flat_args(x, y, z)),
    }


# -- benchmark 4: full convolution ------------------------------------------------


def convolution_methods():
    return {
        "triot": reference.convolve_triot,
        "tuple-iteration": reference.convolve_tuple_iteration,
    }
