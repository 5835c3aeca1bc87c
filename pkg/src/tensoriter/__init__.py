"""Broadcast callbacks over dense tensors of runtime dimension using
dimension-specialized, generated loop kernels."""
import warnings

from ._jit import JIT_ENABLED
from .core import (
    AxisOutOfBounds,
    DimensionMismatch,
    LogShape,
    ShapeError,
    Tensor,
    TensorView,
    advance_tuple,
    check_bounds,
    flat_size,
    index_to_tuple,
    reindex,
    reindex_powers_of_2,
    tuple_to_index,
    view,
)
from .engine import (
    MAX_DIMENSION,
    UnsupportedDimension,
    apply,
    dispatch_dimension,
    enumerate_for_each,
    for_each,
    modify,
)
from .reference import (
    convolve_triot,
    convolve_tuple_iteration,
    copy_embedded,
    fused_update,
    inner_product_shared,
)

if JIT_ENABLED:
    from numba.core.errors import NumbaExperimentalFeatureWarning

    # kernels take compiled callbacks as arguments
    warnings.filterwarnings("ignore", category=NumbaExperimentalFeatureWarning)

__all__ = [
    "AxisOutOfBounds", "DimensionMismatch", "JIT_ENABLED", "LogShape", "MAX_DIMENSION",
    "ShapeError", "Tensor", "TensorView", "UnsupportedDimension", "advance_tuple", "apply",
    "check_bounds", "convolve_triot", "convolve_tuple_iteration", "copy_embedded",
    "dispatch_dimension", "enumerate_for_each", "flat_size", "for_each", "fused_update",
    "index_to_tuple", "inner_product_shared", "modify", "reindex", "reindex_powers_of_2",
    "tuple_to_index", "view",
]
