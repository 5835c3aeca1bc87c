import math

import numpy as np
import pytest
from numba import njit
from hypothesis import given, settings, strategies as st

from helpers import lexicographic_tuples, row_major_index
from tensoriter import (
    AxisOutOfBounds,
    DimensionMismatch,
    LogShape,
    ShapeError,
    Tensor,
    advance_tuple,
    check_bounds,
    flat_size,
    index_to_tuple,
    reindex,
    reindex_powers_of_2,
    tuple_to_index,
    view,
)
from tensoriter.core import (
    INDEX_DTYPE,
    _advance_tuple,
    _tuple_to_index,
    advance_tuple_fixed,
    tuple_to_index_fixed,
)


@st.composite
def shapes(draw, max_dim=8, max_size=100_000, min_axis=1):
    d = draw(st.integers(1, max_dim))
    cap = max(1, int(max_size ** (1.0 / d)))
    return tuple(draw(st.integers(min_axis, cap)) for _ in range(d))


@st.composite
def shape_and_tuple(draw, **kw):
    shape = draw(shapes(**kw))
    return shape, tuple(draw(st.integers(0, a - 1)) for a in shape)


# -- flat_size -------------------------------------------------------------


@pytest.mark.parametrize(
    "shape, expected", [((4, 9, 7, 5), 1260), ((1, 1, 1), 1), ((3, 0, 5), 0)]
)
def test_flat_size(shape, expected):
    assert flat_size(shape) == expected


def test_scalar_shape_rejected():
    with pytest.raises(ShapeError):
        flat_size(())
    with pytest.raises(ShapeError):
        Tensor(())


def test_negative_axis_rejected():
    with pytest.raises(ShapeError):
        Tensor((2, -1))


# -- tuple_to_index / index_to_tuple ---------------------------------------------


def test_worked_flat_index():
    assert tuple_to_index((2, 0, 4, 1), (4, 9, 7, 5)) == 651
    assert 2 * 9 * 7 * 5 + 0 * 7 * 5 + 4 * 5 + 1 == 651


def test_tuple_to_index_edges():
    assert tuple_to_index((0, 0, 0), (4, 9, 7)) == 0
    assert tuple_to_index((3, 8, 6, 4), (4, 9, 7, 5)) == 1259


def test_tuple_to_index_dimension_mismatch():
    with pytest.raises(DimensionMismatch):
        tuple_to_index((1, 2), (3, 3, 3))


def test_index_to_tuple_examples():
    assert index_to_tuple(651, (4, 9, 7, 5)) == (2, 0, 4, 1)
    assert index_to_tuple(0, (3, 2)) == (0, 0)
    # brute force: position 1259 in lexicographic enumeration
    assert index_to_tuple(1259, (4, 9, 7, 5)) == lexicographic_tuples((4, 9, 7, 5))[1259]


@pytest.mark.parametrize("index", [-1, 1260, 5000])
def test_index_to_tuple_out_of_range(index):
    with pytest.raises(IndexError):
        index_to_tuple(index, (4, 9, 7, 5))


@given(shape_and_tuple())
def test_round_trip_from_tuple(case):
    shape, tup = case
    i = tuple_to_index(tup, shape)
    assert i == row_major_index(tup, shape)
    assert index_to_tuple(i, shape) == tup


@given(shapes(max_size=2000))
def test_bijection_and_order(shape):
    tuples = lexicographic_tuples(shape)
    indices = [tuple_to_index(t, shape) for t in tuples]
    assert indices == list(range(flat_size(shape)))
    assert all(index_to_tuple(i, shape) == t for i, t in zip(indices, tuples))


@njit
def _linearize_all(tuples, layout):
    out = np.empty(tuples.shape[0], dtype=np.uint64)
    for n in range(tuples.shape[0]):
        out[n] = _tuple_to_index(tuples[n], layout, layout.shape[0])
    return out


@settings(max_examples=20, deadline=None)
@given(shapes(max_size=100_000))
def test_bijection_large(shape):
    # tuples come from numpy's own unravel, in lexicographic order
    n = flat_size(shape)
    tuples = np.array(np.unravel_index(np.arange(n), shape), dtype=INDEX_DTYPE).T.copy()
    got = _linearize_all(tuples, np.array(shape, dtype=INDEX_DTYPE))
    assert np.array_equal(got, np.arange(n, dtype=np.uint64))


# -- advance_tuple --------------------------------------------------------------


@pytest.mark.parametrize(
    "before, after",
    [((0, 0, 6), (0, 1, 0)), ((0, 0, 5), (0, 0, 6)), ((0, 8, 6), (1, 0, 0))],
)
def test_advance_tuple_examples(before, after):
    shape = (4, 9, 7)
    tup = list(before)
    assert advance_tuple(tup, shape) == list(after)
    assert tuple(tup) == index_to_tuple(tuple_to_index(before, shape) + 1, shape)


def test_advance_tuple_on_array_in_place():
    t = np.array([0, 8, 6], dtype=INDEX_DTYPE)
    out = advance_tuple(t, (4, 9, 7))
    assert out is t and t.tolist() == [1, 0, 0]


@pytest.mark.parametrize("shape", [(3,), (2, 3), (4, 9, 7)])
def test_advance_past_end_is_one_past_end(shape):
    tup = [a - 1 for a in shape]
    advance_tuple(tup, shape)
    assert tup == [shape[0]] + [0] * (len(shape) - 1)


@settings(deadline=None)
@given(shapes(max_size=3000))
def test_odometer_enumerates_lexicographically(shape):
    expected = lexicographic_tuples(shape)
    tup = [0] * len(shape)
    seen = [tuple(tup)]
    for _ in range(len(expected) - 1):
        advance_tuple(tup, shape)
        seen.append(tuple(tup))
    assert seen == expected


@pytest.mark.parametrize("d", range(1, 9))
def test_fixed_dimension_variants_match_generic(d):
    rng = np.random.default_rng(d)
    shape = tuple(int(a) for a in rng.integers(1, 4, size=d))
    layout = np.array(shape, dtype=INDEX_DTYPE)
    lin, adv = tuple_to_index_fixed(d), advance_tuple_fixed(d)
    t_fixed = np.zeros(d, dtype=INDEX_DTYPE)
    t_generic = np.zeros(d, dtype=INDEX_DTYPE)
    for i in range(math.prod(shape)):
        assert lin(t_fixed, layout) == _tuple_to_index(t_generic, layout, d) == i
        adv(t_fixed, layout)
        _advance_tuple(t_generic, layout, d)
        assert np.array_equal(t_fixed, t_generic)


# -- reindex -------------------------------------------------------------------


def test_reindex_examples():
    assert reindex(0, (4, 9, 7, 5), (5, 10, 8, 6)) == 0
    assert reindex(651, (4, 9, 7, 5), (5, 10, 8, 6)) == 985
    assert tuple_to_index(index_to_tuple(651, (4, 9, 7, 5)), (5, 10, 8, 6)) == 985
    assert reindex(651, (4, 9, 7, 5), (4, 9, 7, 5)) == 651


def test_reindex_dimension_mismatch():
    with pytest.raises(DimensionMismatch):
        reindex(3, (2, 2), (2, 2, 2))


@given(st.data())
def test_reindex_coherence(data):
    shape = data.draw(shapes(max_size=5000))
    new_shape = tuple(a + data.draw(st.integers(0, 3)) for a in shape)
    i = data.draw(st.integers(0, flat_size(shape) - 1))
    assert reindex(i, shape, new_shape) == tuple_to_index(index_to_tuple(i, shape), new_shape)


def test_reindex_powers_of_2_examples():
    assert reindex_powers_of_2(13, (2, 3), (3, 4)) == 21
    assert reindex(13, (4, 8), (8, 16)) == 21
    assert reindex_powers_of_2(0, (1, 2), (3, 3)) == 0
    for i in range(32):
        assert reindex_powers_of_2(i, LogShape((2, 3)), LogShape((3, 4))) == reindex(i, (4, 8), (8, 16))


def test_reindex_powers_of_2_dimension_mismatch():
    with pytest.raises(DimensionMismatch):
        reindex_powers_of_2(1, (1, 1), (1,))


def test_log_shape_round_trip():
    ls = LogShape.from_shape((1, 4, 1024))
    assert ls.log_axes == (0, 2, 10)
    assert ls.to_shape() == (1, 4, 1024)
    with pytest.raises(ShapeError):
        LogShape.from_shape((3, 4))


# -- check_bounds ----------------------------------------------------------------


def test_check_bounds_ok():
    check_bounds((2, 2), [(2, 2), (3, 3)])


def test_check_bounds_axis_out_of_bounds():
    with pytest.raises(AxisOutOfBounds) as err:
        check_bounds((3, 3), [(2, 3)])
    assert (err.value.tensor, err.value.axis) == (0, 0)


def test_check_bounds_dimension_mismatch():
    with pytest.raises(DimensionMismatch) as err:
        check_bounds((2, 2), [(2, 2), (2, 2, 2)])
    assert err.value.tensor == 1


# -- tensors and views ---------------------------------------------------------


def test_tensor_element_access():
    t = Tensor.from_array(np.arange(24.0).reshape(2, 3, 4))
    assert t[(1, 2, 3)] == 23.0
    t[(0, 1, 2)] = -1.0
    assert t.to_array()[0, 1, 2] == -1.0
    with pytest.raises(ShapeError):
        Tensor((2, 2), np.zeros(5))


def test_full_view_is_identity():
    base = Tensor.from_array(np.arange(20.0).reshape(4, 5))
    v = view(base, (0, 0), (4, 5))
    assert v.bias == 0
    assert np.array_equal(v.to_array(), base.to_array())


def test_view_origin_bias():
    base = Tensor.from_array(np.arange(20.0).reshape(4, 5))
    v = base.view((1, 2), (2, 2))
    assert v.bias == tuple_to_index((1, 2), (4, 5)) == 7
    assert v[(0, 0)] == base.flat[7]
    visited = sorted(v.bias + tuple_to_index(t, base.shape) for t in lexicographic_tuples((2, 2)))
    assert visited == [7, 8, 12, 13]
    assert np.array_equal(v.materialize().flat, base.flat[[7, 8, 12, 13]])


def test_view_of_view_and_writes():
    base = Tensor.from_array(np.zeros((5, 6)))
    inner = base.view((1, 1), (3, 4)).view((1, 2), (2, 2))
    assert inner.base is base and inner.start == (2, 3)
    inner[(1, 1)] = 9.0
    assert base.to_array()[3, 4] == 9.0


@pytest.mark.parametrize(
    "start, window, exc",
    [((3, 0), (2, 2), AxisOutOfBounds), ((0, 0), (5, 1), AxisOutOfBounds), ((0,), (1,), DimensionMismatch)],
)
def test_view_bounds(start, window, exc):
    base = Tensor((4, 5))
    with pytest.raises(exc):
        view(base, start, window)
