"""Compiled against pure-Python series kernels.

    python benchmarks/bench_kernels.py [--terms 200] [--repeat 5] [--end-to-end]

The kernel rows time ``convolve`` and ``merge_add`` on random sparse term
lists.  ``--end-to-end`` also classifies every standard witness in a child
process with and without ``HOLEFIELD_PURE``.
"""

from __future__ import annotations

import argparse
import os
import random
import subprocess
import sys
import timeit
from fractions import Fraction

from holefield import _pykernels

try:
    from holefield import _ckernels
except ImportError:
    _ckernels = None


def terms(rng: random.Random, n: int, spread: int):
    exps = sorted(rng.sample(range(-spread, spread), n))
    return exps, [Fraction(rng.randint(-9, 9) or 1, rng.randint(1, 4)) for _ in exps]


def bench_kernels(n: int, repeat: int, seed: int) -> list[tuple[str, float, float | None]]:
    rng = random.Random(seed)
    a, b = terms(rng, n, 20 * n), terms(rng, n, 20 * n)
    bound = 10 * n
    rows = []
    for name in ("convolve", "merge_add"):
        args = (*a, *b, bound)
        number = 20 if name == "convolve" else 2000
        py = min(timeit.repeat(lambda: getattr(_pykernels, name)(*args), number=number, repeat=repeat)) / number
        c = None
        if _ckernels is not None:
            assert getattr(_ckernels, name)(*args) == getattr(_pykernels, name)(*args)
            c = min(timeit.repeat(lambda: getattr(_ckernels, name)(*args), number=number, repeat=repeat)) / number
        rows.append((name, py, c))
    return rows


WORKLOAD = """
import time
from holefield.classify import ALL_LABELS, classify
from holefield.witness import build_witness
t = time.perf_counter()
for L in ALL_LABELS:
    classify(build_witness(L).space)
print(time.perf_counter() - t)
"""


def end_to_end(pure: bool) -> float:
    env = dict(os.environ)
    if pure:
        env["HOLEFIELD_PURE"] = "1"
    else:
        env.pop("HOLEFIELD_PURE", None)
    out = subprocess.run([sys.executable, "-c", WORKLOAD], env=env, capture_output=True, text=True, check=True)
    return float(out.stdout.strip())


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--terms", type=int, default=200, help="terms per operand")
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--end-to-end", action="store_true", help="also time classification of all witnesses")
    args = ap.parse_args(argv)

    print(f"{'kernel':<12}{'python (ms)':>14}{'compiled (ms)':>16}{'speedup':>10}")
    for name, py, c in bench_kernels(args.terms, args.repeat, args.seed):
        cs = f"{c * 1e3:16.3f}" if c is not None else f"{'n/a':>16}"
        sp = f"{py / c:9.1f}x" if c else f"{'n/a':>10}"
        print(f"{name:<12}{py * 1e3:14.3f}{cs}{sp}")
    if args.end_to_end:
        pure, comp = end_to_end(True), end_to_end(False)
        print(f"{'classify all':<12}{pure * 1e3:14.1f}{comp * 1e3:16.1f}{pure / comp:9.1f}x")
    return 0


if __name__ == "__main__":
    sys.exit(main())
