"""Plain-text tensor fixtures.

Layout: the dimension on line 1, the axis lengths on line 2, then the
row-major element values as whitespace-separated tokens.  Floats are
written with ``repr`` so they round-trip exactly.
"""
from __future__ import annotations

import io
import os

import numpy as np

from .core import ShapeError, Tensor


def format_tensor(tensor, per_line: int = 8) -> str:
    if not isinstance(tensor, Tensor):
        tensor = tensor.materialize()
    out = [str(tensor.dimension), " ".join(str(a) for a in tensor.shape)]
    values = [repr(float(v)) if tensor.flat.dtype.kind == "f" else str(v) for v in tensor.flat.tolist()]
    for i in range(0, len(values), per_line):
        out.append(" ".join(values[i : i + per_line]))
    return "\n".join(out) + "\n"


def parse_tensor(text: str, dtype=np.float64) -> Tensor:
    lines = text.splitlines()
    if len(lines) < 2:
        raise ShapeError("tensor fixture needs a dimension line and a shape line")
    d = int(lines[0].strip())
    shape = tuple(int(tok) for tok in lines[1].split())
    if len(shape) != d:
        raise ShapeError(f"fixture declares dimension {d} but lists {len(shape)} axes")
    tokens = " ".join(lines[2:]).split()
    flat = np.array([float(tok) for tok in tokens], dtype=dtype)
    return Tensor(shape, flat)


def write_tensor(tensor, target) -> None:
    """Write to a path or a text file object."""
    text = format_tensor(tensor)
    if isinstance(target, (str, os.PathLike)):
        with open(target, "w") as fh:
            fh.write(text)
    else:
        target.write(text)


def read_tensor(source, dtype=np.float64) -> Tensor:
    if isinstance(source, (str, os.PathLike)) and not isinstance(source, io.IOBase):
        with open(source) as fh:
            return parse_tensor(fh.read(), dtype)
    return parse_tensor(source.read(), dtype)
