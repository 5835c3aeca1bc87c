"""Time the numba build against the pure-numpy fallback.

Each backend runs in its own interpreter, because the choice is made once at
import time from TENSORITER_DISABLE_JIT.  Shapes are small so the fallback
finishes in seconds.

    python3 benchmarks/compare_backends.py [--reps N]
"""
import argparse
import json
import os
import subprocess
import sys

CASES = [
    (1, ["--shape", "16,16,8", "--shape", "32,16,8"]),
    (2, ["--shape", "16,16,8", "--shape", "32,16,8"]),
    (3, ["--shape", "9,4,6,4", "--shape", "12,8,8,5", "--shape", "10,6,8,6"]),
    (4, ["--shape", "32,4", "--shape", "32,4"]),
]


def run(benchmark, shape_args, reps, disable_jit):
    env = dict(os.environ)
    env["TENSORITER_DISABLE_JIT"] = "1" if disable_jit else "0"
    cmd = [sys.executable, "-m", "tensoriter.bench", "--benchmark", str(benchmark),
           "--reps", str(reps), "--format", "json", *shape_args]
    out = subprocess.run(cmd, env=env, check=True, capture_output=True, text=True).stdout
    return {row["method"]: row for row in json.loads(out)}


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--reps", type=int, default=5)
    args = parser.parse_args(argv)

    print(f"{'bench':>5}  {'method':<27}{'numba ms':>10}{'fallback ms':>12}{'speedup':>10}  checksums")
    for benchmark, shape_args in CASES:
        fast = run(benchmark, shape_args, args.reps, disable_jit=False)
        slow = run(benchmark, shape_args, args.reps, disable_jit=True)
        for method, row in fast.items():
            other = slow[method]
            same = "equal" if row["checksum"] == other["checksum"] else "DIFFER"
            print(
                f"{benchmark:>5}  {method:<27}{row['mean_s'] * 1e3:>10.3f}{other['mean_s'] * 1e3:>12.3f}"
                f"{other['mean_s'] / row['mean_s']:>9.0f}x  {same}"
            )
    return 0


if __name__ == "__main__":
    sys.exit(main())
