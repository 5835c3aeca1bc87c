"""Oracles and recording callbacks shared by the test modules."""
import itertools
import math

import numpy as np
from numba import njit

from tensoriter.core import (
    INDEX_DTYPE,
    Tensor,
    _advance_tuple,
    _tuple_to_index,
    view,
)
from tensoriter._jit import jit


def lexicographic_tuples(shape):
    """All valid tuples in lexicographic order, by brute force."""
    return list(itertools.product(*(range(a) for a in shape)))


def row_major_index(tup, shape):
    """Explicit sum-of-products form, not Horner."""
    return sum(t * math.prod(shape[i + 1:]) for i, t in enumerate(tup))


@jit
def _oracle_walk(shape, layouts, tuples, flats):
    # Generic odometer + linearization with runtime dimension.
    d = shape.shape[0]
    t = np.zeros(d, dtype=np.uint64)
    for n in range(tuples.shape[0]):
        for a in range(d):
            tuples[n, a] = t[a]
        for k in range(layouts.shape[0]):
            flats[k, n] = _tuple_to_index(t, layouts[k], d)
        _advance_tuple(t, shape, d)


def oracle_indices(shape, tensors):
    """(tuples, flat indices per tensor) visited by a generic walk over shape.

    Flat indices are into each tensor's operand buffer (already biased)."""
    n = math.prod(shape)
    layouts = np.array([t._operand(True)[1] for t in tensors], dtype=INDEX_DTYPE)
    tuples = np.zeros((n, len(shape)), dtype=INDEX_DTYPE)
    flats = np.zeros((len(tensors), n), dtype=np.int64)
    if n:
        _oracle_walk(np.array(shape, dtype=INDEX_DTYPE), layouts, tuples, flats)
    return tuples, flats


# -- recording callbacks (compiled) ------------------------------------------


@njit
def record(state, *vals):
    log, pos = state
    i = pos[0]
    for j in range(len(vals)):
        log[i, j] = vals[j]
    pos[0] = i + 1


@njit
def record_apply(state, *vals):
    record(state, *vals)
    s = vals[0] * 0.5
    for j in range(1, len(vals)):
        s += vals[j]
    return s


@njit
def record_modify_one(state, v):
    record(state, v)
    return v * 0.5 + 1.0


@njit
def record_modify(state, *vals):
    record(state, *vals)
    return vals[::-1]


@njit
def record_enumerate(state, counter, dim, *vals):
    log, pos = state
    i = pos[0]
    for j in range(dim):
        log[i, j] = counter[j]
    for j in range(len(vals)):
        log[i, dim + j] = vals[j]
    pos[0] = i + 1


def expected_apply(values):
    s = values[0] * 0.5
    for v in values[1:]:
        s = s + v
    return s


# -- random cases ----------------------------------------------------------


def random_shape(rng, d, max_size=10_000, zero_prob=0.02):
    m = max(1, int(max_size ** (1.0 / d)))
    shape = [int(rng.integers(1, m + 1)) for _ in range(d)]
    if rng.random() < zero_prob:
        shape[int(rng.integers(d))] = 0
    return tuple(shape)


def random_operand(rng, shape, allow_view=True):
    """A random tensor (or view into a larger one) whose shape contains ``shape``."""
    own = tuple(a + int(rng.integers(0, 3)) for a in shape)
    if allow_view and rng.random() < 0.4:
        start = tuple(int(rng.integers(0, 3)) for _ in shape)
        base_shape = tuple(s + a + int(rng.integers(0, 2)) for s, a in zip(start, own))
        base = Tensor(base_shape, rng.standard_normal(math.prod(base_shape)))
        return view(base, start, own)
    return Tensor(own, rng.standard_normal(math.prod(own)))


def snapshot(tensors):
    return [t.base.flat.copy() if hasattr(t, "base") else t.flat.copy() for t in tensors]
