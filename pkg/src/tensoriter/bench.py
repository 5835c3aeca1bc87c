"""Benchmark harness and the ``bench`` command line.

Each method is warmed up once (which also triggers JIT compilation), then
timed ``reps`` times around the task body only; operand initialization is
repeated before every rep and excluded from the timing.
"""
from __future__ import annotations

import argparse
import csv
import gc
import io
import json
import logging
import statistics
import sys
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Sequence

import numpy as np

from . import methods as M
from .core import Tensor, check_bounds, is_power_of_2_shape, ShapeError
from .fixture import write_tensor

log = logging.getLogger(__name__)

FIELDS = ("benchmark", "method", "reps", "min_s", "mean_s", "max_s", "checksum")

# Operand order per benchmark: 1 (dest, src), 2 (x, y), 3 (x, y, z), 4 (lhs, rhs).
PRESETS = {
    "paper": {
        1: ((2**9, 2**9, 2**5), (2**10, 2**9, 2**8)),
        2: ((2**9, 2**9, 2**5), (2**10, 2**9, 2**8)),
        3: (
            (2**7 + 1, 2**5, 2**3 + 5, 2**4),
            (2**8 - 3, 2**6, 2**6, 2**4 + 7),
            (2**8, 2**5 + 7, 2**6, 2**5 + 1),
        ),
        4: ((2**8, 2**3), (2**8, 2**3)),
    },
    "desk": {
        1: ((2**7, 2**7, 2**4), (2**8, 2**7, 2**6)),
        2: ((2**7, 2**7, 2**4), (2**8, 2**7, 2**6)),
        3: (
            (2**5 + 1, 2**3, 2**3 + 5, 2**2),
            (2**6 - 3, 2**4, 2**6, 2**2 + 7),
            (2**6, 2**3 + 7, 2**6, 2**3 + 1),
        ),
        4: ((2**8, 2**3), (2**8, 2**3)),
    },
}
PRESET_REPS = {"paper": 128, "desk": 32}


class BenchmarkError(Exception):
    """Invalid benchmark configuration."""


class ChecksumMismatch(BenchmarkError):
    def __init__(self, benchmark, expected_method, expected, method, got):
        super().__init__(
            f"benchmark {benchmark}: {method} checksum {got!r} != {expected_method} checksum {expected!r}"
        )
        self.method = method


@dataclass(frozen=True)
class BenchmarkRecord:
    benchmark: int
    method: str
    reps: int
    min_s: float
    mean_s: float
    max_s: float
    checksum: float
    samples: tuple = field(default=(), compare=False, repr=False)

    @classmethod
    def from_samples(cls, benchmark, method, samples: Sequence[float], checksum):
        if not samples:
            raise ValueError("need at least one timing sample")
        return cls(
            benchmark, method, len(samples),
            min(samples), statistics.fmean(samples), max(samples),
            float(checksum), tuple(samples),
        )

    @property
    def median_s(self) -> float:
        return statistics.median(self.samples)

    def as_dict(self) -> dict:
        return {k: getattr(self, k) for k in FIELDS}


@dataclass
class BenchmarkConfig:
    benchmark: int
    methods: Sequence[str] | str = "all"
    reps: int = 32
    preset: str = "desk"
    shapes: Sequence[Sequence[int]] | None = None
    seed: int = 0

    def __post_init__(self):
        if self.benchmark not in (1, 2, 3, 4):
            raise BenchmarkError(f"unknown benchmark {self.benchmark}")
        if self.reps < 1:
            raise BenchmarkError("reps must be >= 1")
        if self.shapes is None:
            if self.preset not in PRESETS:
                raise BenchmarkError(f"unknown preset {self.preset!r}")
            self.shapes = PRESETS[self.preset][self.benchmark]
        self.shapes = tuple(tuple(int(a) for a in s) for s in self.shapes)
        _validate_shapes(self.benchmark, self.shapes)
        if self.methods == "all":
            self.methods = applicable_methods(self.benchmark, self.shapes)
        else:
            self.methods = tuple(self.methods)
            allowed = applicable_methods(self.benchmark, self.shapes)
            for m in self.methods:
                if m not in allowed:
                    raise BenchmarkError(f"method {m!r} is not applicable to benchmark {self.benchmark}")
        if not self.methods:
            raise BenchmarkError("no methods selected")


def _validate_shapes(benchmark, shapes):
    expected = 2 if benchmark in (1, 2, 4) else 3
    if len(shapes) != expected:
        raise BenchmarkError(f"benchmark {benchmark} needs {expected} shapes, got {len(shapes)}")
    try:
        if benchmark == 4:
            if len(shapes[0]) != len(shapes[1]):
                raise BenchmarkError("convolution operands must have equal dimension")
            if 0 in shapes[0] or 0 in shapes[1]:
                raise BenchmarkError("convolution operands need every axis >= 1")
        else:
            check_bounds(shapes[0], shapes[1:])
    except ShapeError as exc:
        raise BenchmarkError(f"benchmark {benchmark} shapes {shapes}: {exc}") from exc


def applicable_methods(benchmark: int, shapes) -> tuple[str, ...]:
    if benchmark == 4:
        return ("triot", "tuple-iteration")
    out = []
    for m in M.METHODS:
        if m == "integer-reindex-pow2" and not all(is_power_of_2_shape(s) for s in shapes):
            continue
        if m == "hard-coded-loops" and len(shapes[0]) != M.HARD_CODED_DIMENSIONS[benchmark]:
            continue
        out.append(m)
    return tuple(out)


def _random_tensor(rng, shape):
    return Tensor(shape, rng.random(int(np.prod(shape))))


class _Task:
    """Operands, per-rep reset, body and checksum for one benchmark."""

    def __init__(self, benchmark, shapes, seed):
        rng = np.random.default_rng(seed)
        self.benchmark = benchmark
        self.pristine = [_random_tensor(rng, s) for s in shapes]
        if benchmark == 1:
            self.pristine[0].flat[:] = 0.0
        self.bodies = {
            1: M.copy_methods,
            2: M.dot_methods,
            3: M.fused_methods,
            4: M.convolution_methods,
        }[benchmark]()
        self.operands = [t.copy() if i == 0 else t for i, t in enumerate(self.pristine)]

    def reset(self):
        # only the first operand is ever written
        np.copyto(self.operands[0].flat, self.pristine[0].flat)

    def body(self, method) -> Callable[[], object]:
        fn = self.bodies[method]
        ops = self.operands
        return lambda: fn(*ops)

    def checksum(self, result) -> float:
        if self.benchmark == 2:
            return float(result)
        if self.benchmark == 4:
            return float(np.sum(result.flat))
        return float(np.sum(self.operands[0].flat))


def benchmark_inputs(config: BenchmarkConfig) -> list:
    """The seeded operands a run of ``config`` starts from."""
    return [t.copy() for t in _Task(config.benchmark, config.shapes, config.seed).pristine]


def dump_inputs(config: BenchmarkConfig, directory) -> list[Path]:
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    paths = []
    for i, tensor in enumerate(benchmark_inputs(config)):
        path = directory / f"benchmark{config.benchmark}_operand{i}.txt"
        write_tensor(tensor, path)
        paths.append(path)
    return paths


def run_benchmark(config: BenchmarkConfig, clock: Callable[[], float] = time.perf_counter):
    """Time every configured method; return one record per method.

    Raises :class:`ChecksumMismatch` as soon as a method disagrees with the
    first one.
    """
    task = _Task(config.benchmark, config.shapes, config.seed)
    records = []
    for method in config.methods:
        body = task.body(method)
        task.reset()
        body()  # warm-up, also compiles
        samples = []
        result = None
        for _ in range(config.reps):
            task.reset()
            gc_was_enabled = gc.isenabled()
            gc.disable()
            try:
                start = clock()
                result = body()
                stop = clock()
            finally:
                if gc_was_enabled:
                    gc.enable()
            samples.append(stop - start)
        record = BenchmarkRecord.from_samples(config.benchmark, method, samples, task.checksum(result))
        log.info("benchmark %d %s: mean %.6g s", config.benchmark, method, record.mean_s)
        if records and record.checksum != records[0].checksum:
            raise ChecksumMismatch(
                config.benchmark, records[0].method, records[0].checksum, method, record.checksum
            )
        records.append(record)
    return records


def format_records(records, fmt: str) -> str:
    if not records:
        raise ValueError("no records to emit")
    if fmt == "json":
        return json.dumps([r.as_dict() for r in records], indent=2) + "\n"
    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(FIELDS)
        for r in records:
            writer.writerow([r.benchmark, r.method, r.reps, repr(r.min_s), repr(r.mean_s), repr(r.max_s), repr(r.checksum)])
        return buf.getvalue()
    raise ValueError(f"unknown format {fmt!r}")


def emit(records, fmt: str = "csv", path=None) -> None:
    """Write records as CSV or JSON to ``path``, or stdout when ``path`` is None."""
    text = format_records(records, fmt)
    if path is None:
        sys.stdout.write(text)
    else:
        with open(path, "w") as fh:
            fh.write(text)


def parse_records(text: str, fmt: str) -> list[BenchmarkRecord]:
    if fmt == "json":
        rows = json.loads(text)
    elif fmt == "csv":
        rows = list(csv.DictReader(io.StringIO(text)))
    else:
        raise ValueError(f"unknown format {fmt!r}")
    return [
        BenchmarkRecord(
            int(r["benchmark"]), str(r["method"]), int(r["reps"]),
            float(r["min_s"]), float(r["mean_s"]), float(r["max_s"]), float(r["checksum"]),
        )
        for r in rows
    ]


def _parse_shape(text):
    try:
        return tuple(int(tok) for tok in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad shape {text!r}; expected e.g. 128,128,16")


def build_parser():
    p = argparse.ArgumentParser(
        prog="bench",
        description="Time tensor iteration strategies on the four broadcast benchmarks.",
    )
    p.add_argument("--benchmark", type=int, choices=(1, 2, 3, 4), required=True)
    p.add_argument("--methods", default="all", help="comma-separated method names, or 'all'")
    p.add_argument("--reps", type=int, default=None, help="timed repetitions (default 32; 128 for --preset paper)")
    p.add_argument("--preset", choices=sorted(PRESETS), default="desk")
    p.add_argument(
        "--shape", type=_parse_shape, action="append", dest="shapes",
        help="operand shape; repeat once per operand to override the preset",
    )
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--out", default=None, help="output path (default stdout)")
    p.add_argument("--dump-inputs", metavar="DIR", default=None,
                   help="also write the seeded operands to DIR as text fixtures")
    p.add_argument("-v", "--verbose", action="store_true")
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")
    methods = "all" if args.methods == "all" else tuple(m.strip() for m in args.methods.split(",") if m.strip())
    reps = args.reps if args.reps is not None else PRESET_REPS[args.preset]
    try:
        config = BenchmarkConfig(args.benchmark, methods, reps, args.preset, args.shapes, args.seed)
        if args.dump_inputs:
            dump_inputs(config, args.dump_inputs)
        records = run_benchmark(config)
        emit(records, args.format, args.out)
    except (BenchmarkError, OSError) as exc:
        print(f"bench: error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
