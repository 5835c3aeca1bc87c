"""Source generation for dimension-fixed loop kernels.

Every generated function has its dimension baked into the source text: the
loop nest depth, the unrolled Horner linearization and the unrolled carry
chain are all emitted for one constant.  The text is compiled with ``exec``
and, when JIT is enabled, handed to numba, which then sees straight-line
code with no loop over the dimension.
"""
from __future__ import annotations

from ._jit import jit

MODES = ("for_each", "apply", "modify", "enumerate")


def _horner(dimension: int, tensor: int) -> str:
    # ((i0 * s_1 + i1) * s_2 + i2) ... using the tensor's own layout shape
    expr = "i0"
    for axis in range(1, dimension):
        expr = f"({expr} * s{tensor}_{axis} + i{axis})"
    return expr


def kernel_name(mode: str, dimension: int, arity: int, stateful: bool) -> str:
    return f"_{mode}_d{dimension}_n{arity}{'_s' if stateful else ''}"


def kernel_source(mode: str, dimension: int, arity: int, stateful: bool) -> str:
    """Source of one nested-loop kernel.

    Signature: ``(shape, f, [state,] a0, s0, a1, s1, ...)`` where ``aK`` is a
    flat buffer (already offset by any view bias) and ``sK`` its row-major
    layout shape.
    """
    if mode not in MODES:
        raise ValueError(f"unknown kernel mode {mode!r}")
    if dimension < 1 or arity < 1:
        raise ValueError("dimension and arity must be >= 1")

    params = ["shape", "f"] + (["state"] if stateful else [])
    for t in range(arity):
        params += [f"a{t}", f"s{t}"]
    lines = [f"def {kernel_name(mode, dimension, arity, stateful)}({', '.join(params)}):"]

    for axis in range(dimension):
        lines.append(f"    n{axis} = shape[{axis}]")
    for t in range(arity):
        for axis in range(1, dimension):
            lines.append(f"    s{t}_{axis} = s{t}[{axis}]")

    indent = "    "
    for axis in range(dimension):
        lines.append(f"{indent}for i{axis} in range(n{axis}):")
        indent += "    "
    for t in range(arity):
        lines.append(f"{indent}k{t} = {_horner(dimension, t)}")

    values = [f"a{t}[k{t}]" for t in range(arity)]
    lead = ["state"] if stateful else []
    if mode == "enumerate":
        counter = "(" + ", ".join(f"i{a}" for a in range(dimension)) + ("," if dimension == 1 else "") + ")"
        lead += [counter, str(dimension)]
    call = f"f({', '.join(lead + values)})"

    if mode in ("for_each", "enumerate"):
        lines.append(f"{indent}{call}")
    elif mode == "apply" or arity == 1:
        lines.append(f"{indent}a0[k0] = {call}")
    else:
        lines.append(f"{indent}r = {call}")
        for t in range(arity):
            lines.append(f"{indent}a{t}[k{t}] = r[{t}]")
    return "\n".join(lines) + "\n"


def compile_source(source: str, name: str, use_jit: bool, env: dict | None = None):
    namespace: dict = dict(env or {})
    exec(compile(source, f"<generated {name}>", "exec"), namespace)
    fn = namespace[name]
    return jit(fn) if use_jit else fn


def build_kernel(mode: str, dimension: int, arity: int, stateful: bool, use_jit: bool):
    name = kernel_name(mode, dimension, arity, stateful)
    return compile_source(kernel_source(mode, dimension, arity, stateful), name, use_jit)


def tuple_to_index_fixed_source(dimension: int) -> str:
    lines = [f"def tuple_to_index_fixed_d{dimension}(tup, shape):"]
    expr = "tup[0]"
    for axis in range(1, dimension):
        expr = f"({expr} * shape[{axis}] + tup[{axis}])"
    lines.append(f"    return {expr}")
    return "\n".join(lines) + "\n"


def advance_tuple_fixed_source(dimension: int) -> str:
    # The carry loop keeps a constant trip count instead of being unrolled by
    # hand: unrolled branch chains defeat numba's refcount pruning.
    last = dimension - 1
    lines = [
        f"def advance_tuple_fixed_d{dimension}(tup, shape):",
        f"    tup[{last}] += ONE",
        f"    for k in range({last}, 0, -1):",
        "        if tup[k] >= shape[k]:",
        "            tup[k - 1] += ONE",
        "            tup[k] = ZERO",
        "        else:",
        "            return",
    ]
    return "\n".join(lines) + "\n"
