"""Shapes, tensors, views and scalar index arithmetic.

Layout is row-major throughout.  Index arithmetic runs on unsigned 64-bit
integers; the ``_``-prefixed kernels below take ``np.uint64`` arrays and are
what the iteration baselines call in their inner loops.  The public
functions wrap them with validation and plain-``int`` results.
"""
from __future__ import annotations

import functools
import math
from typing import Sequence

import numpy as np

from . import codegen
from ._jit import JIT_ENABLED, jit

INDEX_DTYPE = np.uint64
_ZERO = np.uint64(0)
_ONE = np.uint64(1)


class ShapeError(ValueError):
    """Invalid shape, or shapes that do not fit together."""


class DimensionMismatch(ShapeError):
    def __init__(self, message, tensor=None):
        super().__init__(message)
        self.tensor = tensor


class AxisOutOfBounds(ShapeError):
    def __init__(self, message, tensor, axis):
        super().__init__(message)
        self.tensor = tensor
        self.axis = axis


def as_shape(axes: Sequence[int]) -> tuple[int, ...]:
    """Validate ``axes`` and return it as a tuple of ints.

    Dimension 0 is rejected; zero-length axes are allowed (empty tensor).
    """
    shape = tuple(int(a) for a in axes)
    if len(shape) == 0:
        raise ShapeError("shape must have at least one axis")
    if any(a < 0 for a in shape):
        raise ShapeError(f"negative axis length in {shape}")
    return shape


def flat_size(shape: Sequence[int]) -> int:
    return math.prod(as_shape(shape))


def _index_array(values) -> np.ndarray:
    return np.array([int(v) for v in values], dtype=INDEX_DTYPE)


# -- kernels ---------------------------------------------------------------


@jit(cache=True)
def _tuple_to_index(tup, shape, dimension):
    res = _ZERO
    for k in range(dimension - 1):
        res += tup[k]
        res *= shape[k + 1]
    return res + tup[dimension - 1]


@jit(cache=True)
def _advance_tuple(tup, shape, dimension):
    tup[dimension - 1] += _ONE
    for k in range(dimension - 1, 0, -1):
        if tup[k] >= shape[k]:
            tup[k - 1] += _ONE
            tup[k] = _ZERO
        else:
            return


@jit(cache=True)
def _index_to_tuple(index, shape, dimension, out):
    for k in range(dimension - 1, -1, -1):
        out[k] = index % shape[k]
        index //= shape[k]


@jit(cache=True)
def _reindex(index, shape, new_shape, dimension):
    new_index = _ZERO
    new_axis_product_from_right = _ONE
    i = dimension - 1
    while index > _ZERO and i >= 0:
        next_axis = shape[i]
        new_index += (index % next_axis) * new_axis_product_from_right
        index //= next_axis
        new_axis_product_from_right *= new_shape[i]
        i -= 1
    return new_index


@jit(cache=True)
def _reindex_powers_of_2(index, log_shape, new_log_shape, dimension):
    new_index = _ZERO
    new_axis_sum_from_right = _ZERO
    i = dimension - 1
    while index > _ZERO and i >= 0:
        next_log_axis = log_shape[i]
        new_index += (index & ((_ONE << next_log_axis) - _ONE)) << new_axis_sum_from_right
        index >>= next_log_axis
        new_axis_sum_from_right += new_log_shape[i]
        i -= 1
    return new_index


@functools.lru_cache(maxsize=None)
def tuple_to_index_fixed(dimension: int):
    """Linearization specialized for one dimension (unrolled Horner form).

    The returned function takes ``(tup, shape)`` index arrays.
    """
    src = codegen.tuple_to_index_fixed_source(dimension)
    return codegen.compile_source(src, f"tuple_to_index_fixed_d{dimension}", JIT_ENABLED)


@functools.lru_cache(maxsize=None)
def advance_tuple_fixed(dimension: int):
    """Odometer advance specialized for one dimension (unrolled carries)."""
    src = codegen.advance_tuple_fixed_source(dimension)
    env = {"ONE": _ONE, "ZERO": _ZERO}
    return codegen.compile_source(src, f"advance_tuple_fixed_d{dimension}", JIT_ENABLED, env)


# -- public index arithmetic -------------------------------------------------


def _check_same_dimension(a, b, what):
    if len(a) != len(b):
        raise DimensionMismatch(f"{what}: dimension {len(a)} != {len(b)}")


def tuple_to_index(tup: Sequence[int], shape: Sequence[int]) -> int:
    """Row-major flat index of ``tup`` in ``shape``.

    >>> tuple_to_index((2, 0, 4, 1), (4, 9, 7, 5))
    651
    """
    shape = as_shape(shape)
    _check_same_dimension(tup, shape, "tuple_to_index")
    return int(_tuple_to_index(_index_array(tup), _index_array(shape), len(shape)))


def index_to_tuple(index: int, shape: Sequence[int]) -> tuple[int, ...]:
    shape = as_shape(shape)
    index = int(index)
    if not 0 <= index < math.prod(shape):
        raise IndexError(f"flat index {index} out of range for shape {shape}")
    out = np.zeros(len(shape), dtype=INDEX_DTYPE)
    _index_to_tuple(np.uint64(index), _index_array(shape), len(shape), out)
    return tuple(int(v) for v in out)


def advance_tuple(tup, shape: Sequence[int]):
    """Advance ``tup`` in place to its lexicographic successor.

    ``tup`` is a mutable sequence (list or integer array).  Advancing the last
    valid tuple leaves the one-past-end state ``(shape[0], 0, ..., 0)``,
    which is never a valid tuple; callers bound iteration by the flat size.
    """
    shape = as_shape(shape)
    _check_same_dimension(tup, shape, "advance_tuple")
    if isinstance(tup, np.ndarray) and tup.dtype == INDEX_DTYPE:
        _advance_tuple(tup, _index_array(shape), len(shape))
        return tup
    work = _index_array(tup)
    _advance_tuple(work, _index_array(shape), len(shape))
    tup[:] = [int(v) for v in work]
    return tup


def reindex(index: int, shape: Sequence[int], new_shape: Sequence[int]) -> int:
    """Map a flat index in ``shape`` to the flat index of the same tuple in
    ``new_shape``.  Tuples that do not fit ``new_shape`` are not detected."""
    shape, new_shape = as_shape(shape), as_shape(new_shape)
    _check_same_dimension(shape, new_shape, "reindex")
    return int(_reindex(np.uint64(index), _index_array(shape), _index_array(new_shape), len(shape)))


class LogShape:
    """A shape whose axes are all powers of two, stored as base-2 logs."""

    __slots__ = ("log_axes",)

    def __init__(self, log_axes: Sequence[int]):
        log_axes = tuple(int(v) for v in log_axes)
        if not log_axes or any(v < 0 or v > 63 for v in log_axes):
            raise ShapeError(f"invalid log shape {log_axes}")
        self.log_axes = log_axes

    @classmethod
    def from_shape(cls, shape: Sequence[int]) -> "LogShape":
        shape = as_shape(shape)
        for a in shape:
            if a < 1 or a & (a - 1):
                raise ShapeError(f"axis {a} of {shape} is not a power of two")
        return cls([a.bit_length() - 1 for a in shape])

    def to_shape(self) -> tuple[int, ...]:
        return tuple(1 << v for v in self.log_axes)

    def __len__(self):
        return len(self.log_axes)

    def __eq__(self, other):
        return isinstance(other, LogShape) and other.log_axes == self.log_axes

    def __hash__(self):
        return hash(self.log_axes)

    def __repr__(self):
        return f"LogShape({self.log_axes})"


def is_power_of_2_shape(shape: Sequence[int]) -> bool:
    return all(a >= 1 and not a & (a - 1) for a in shape)


def reindex_powers_of_2(index: int, log_shape, new_log_shape) -> int:
    """:func:`reindex` for power-of-two shapes using masks and shifts."""
    if not isinstance(log_shape, LogShape):
        log_shape = LogShape(log_shape)
    if not isinstance(new_log_shape, LogShape):
        new_log_shape = LogShape(new_log_shape)
    _check_same_dimension(log_shape.log_axes, new_log_shape.log_axes, "reindex_powers_of_2")
    return int(
        _reindex_powers_of_2(
            np.uint64(index),
            _index_array(log_shape.log_axes),
            _index_array(new_log_shape.log_axes),
            len(log_shape),
        )
    )


def check_bounds(iteration_shape: Sequence[int], tensor_shapes) -> None:
    """Single up-front check that ``iteration_shape`` fits every tensor.

    Raises :class:`DimensionMismatch` or :class:`AxisOutOfBounds` naming the
    first offending tensor (by position) and axis.
    """
    iteration_shape = as_shape(iteration_shape)
    d = len(iteration_shape)
    for k, shape in enumerate(tensor_shapes):
        if len(shape) != d:
            raise DimensionMismatch(
                f"tensor {k} has dimension {len(shape)}, iteration shape has {d}", tensor=k
            )
        for axis in range(d):
            if iteration_shape[axis] > shape[axis]:
                raise AxisOutOfBounds(
                    f"iteration axis {axis} ({iteration_shape[axis]}) exceeds tensor {k} "
                    f"axis ({shape[axis]})",
                    tensor=k,
                    axis=axis,
                )


# -- tensors -----------------------------------------------------------------


class Tensor:
    """Dense row-major tensor: a contiguous 1-D ``flat`` array plus a shape."""

    __slots__ = ("shape", "_flat", "_layout")

    def __init__(self, shape: Sequence[int], flat=None, dtype=np.float64):
        self.shape = as_shape(shape)
        n = math.prod(self.shape)
        if flat is None:
            flat = np.zeros(n, dtype=dtype)
        else:
            flat = np.ascontiguousarray(flat).reshape(-1)
            if flat.size != n:
                raise ShapeError(f"flat has {flat.size} elements, shape {self.shape} needs {n}")
        self._flat = flat
        self._layout = _index_array(self.shape)

    @classmethod
    def from_array(cls, array) -> "Tensor":
        array = np.asarray(array)
        return cls(array.shape, array.ravel().copy())

    @property
    def flat(self) -> np.ndarray:
        return self._flat

    @flat.setter
    def flat(self, values):
        values = np.ascontiguousarray(values).reshape(-1)
        if values.size != self._flat.size:
            raise ShapeError("replacement flat must keep the element count")
        self._flat = values

    @property
    def dimension(self) -> int:
        return len(self.shape)

    @property
    def flat_size(self) -> int:
        return self._flat.size

    def to_array(self) -> np.ndarray:
        return self._flat.reshape(self.shape).copy()

    def copy(self) -> "Tensor":
        return Tensor(self.shape, self._flat.copy())

    def view(self, start: Sequence[int], window: Sequence[int]) -> "TensorView":
        return view(self, start, window)

    def _operand(self, use_jit: bool):
        return self._flat, (self._layout if use_jit else self.shape)

    def __getitem__(self, tup):
        return self._flat[tuple_to_index(tup, self.shape)]

    def __setitem__(self, tup, value):
        self._flat[tuple_to_index(tup, self.shape)] = value

    def __repr__(self):
        return f"Tensor(shape={self.shape}, dtype={self._flat.dtype})"


class TensorView:
    """Window into a tensor: ``bias`` is the flat offset of the window origin.

    Element ``t`` of the view is ``base.flat[bias + tuple_to_index(t,
    base.shape)]``; nothing is copied.
    """

    __slots__ = ("base", "bias", "shape", "start")

    def __init__(self, base: Tensor, start: Sequence[int], window: Sequence[int]):
        self.base = base
        self.start = tuple(int(v) for v in start)
        self.shape = as_shape(window)
        self.bias = tuple_to_index(self.start, base.shape) if math.prod(base.shape) else 0

    @property
    def window(self) -> tuple[int, ...]:
        return self.shape

    @property
    def dimension(self) -> int:
        return len(self.shape)

    @property
    def flat_size(self) -> int:
        return math.prod(self.shape)

    def _operand(self, use_jit: bool):
        return self.base._flat[self.bias:], self.base._operand(use_jit)[1]

    def _base_index(self, tup) -> int:
        _check_same_dimension(tup, self.shape, "view index")
        return self.bias + tuple_to_index(tup, self.base.shape)

    def __getitem__(self, tup):
        return self.base._flat[self._base_index(tup)]

    def __setitem__(self, tup, value):
        self.base._flat[self._base_index(tup)] = value

    def materialize(self) -> Tensor:
        """Copy the window into a new contiguous tensor."""
        out = Tensor(self.shape, dtype=self.base.flat.dtype)
        if out.flat_size:
            src = self.base.flat.reshape(self.base.shape)
            sl = tuple(slice(s, s + w) for s, w in zip(self.start, self.shape))
            out.flat[:] = src[sl].ravel()
        return out

    def to_array(self) -> np.ndarray:
        return self.materialize().to_array()

    def view(self, start: Sequence[int], window: Sequence[int]) -> "TensorView":
        return view(self, start, window)

    def __repr__(self):
        return f"TensorView(start={self.start}, window={self.shape}, base_shape={self.base.shape})"


def view(base, start: Sequence[int], window: Sequence[int]) -> TensorView:
    """Window of ``base`` with origin ``start`` and extent ``window``.

    A view of a view is flattened onto the underlying tensor.
    """
    window = as_shape(window)
    start = tuple(int(v) for v in start)
    if len(start) != base.dimension or len(window) != base.dimension:
        raise DimensionMismatch(
            f"view of a {base.dimension}-d tensor needs {base.dimension}-d start and window"
        )
    for axis, (s, w, b) in enumerate(zip(start, window, base.shape)):
        if s < 0 or s + w > b or (w > 0 and s >= b):
            raise AxisOutOfBounds(
                f"window [{s}, {s + w}) exceeds axis {axis} of length {b}", tensor=0, axis=axis
            )
    if isinstance(base, TensorView):
        start = tuple(a + b for a, b in zip(base.start, start))
        base = base.base
    return TensorView(base, start, window)
