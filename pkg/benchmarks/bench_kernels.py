"""Compiled vs numpy kernels for the exhaustive Schwartz-model checks.

    python benchmarks/bench_kernels.py [--repeat 3]

Prints the best wall time of each backend per (kernel, p, r, M) and the
speed-up; the mismatch counts of both backends must agree.
"""

import argparse
import sys
import timeit

from asai_padic import _kernels_py

try:
    from asai_padic import _kernels
except ImportError:
    _kernels = None

CASES = [
    ("unit_average", 3, 2, 5),
    ("unit_average", 5, 1, 3),
    ("unit_average", 5, 2, 4),
    ("distribution", 3, 2, 5),
    ("distribution", 5, 1, 3),
    ("distribution", 5, 2, 4),
    ("distribution", 7, 1, 3),
]


def _call(mod, kernel, p, r, M):
    fn = mod.unit_average_mismatches if kernel == "unit_average" else mod.distribution_mismatches
    return fn(p, r, M)


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args(argv)
    if _kernels is None:
        print("compiled extension not built; run `pip install -e . --no-build-isolation`", file=sys.stderr)
        return 1
    print(f"{'kernel':<14}{'p':>3}{'r':>3}{'M':>3}{'points':>10}{'cython s':>12}{'numpy s':>12}{'speed-up':>10}")
    for kernel, p, r, M in CASES:
        a = _call(_kernels, kernel, p, r, M)
        b = _call(_kernels_py, kernel, p, r, M)
        if a != b:
            print(f"backends disagree on {kernel} p={p} r={r} M={M}: {a} vs {b}", file=sys.stderr)
            return 1
        tc = min(timeit.repeat(lambda: _call(_kernels, kernel, p, r, M), number=1, repeat=args.repeat))
        tp = min(timeit.repeat(lambda: _call(_kernels_py, kernel, p, r, M), number=1, repeat=args.repeat))
        print(f"{kernel:<14}{p:>3}{r:>3}{M:>3}{p ** (2 * M):>10}{tc:>12.4f}{tp:>12.4f}{tp / tc:>9.1f}x")
    return 0


if __name__ == "__main__":
    sys.exit(main())
