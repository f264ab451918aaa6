#!/usr/bin/env python3
"""Time the compiled update kernels against the numpy fallback.

The two backends produce bit-identical results (the test suite asserts
this); this script measures what the fused single-pass loops buy over
numpy's multi-temporary expressions.

    python3 benchmarks/bench_kernels.py --elements 1000000 --steps 20
"""

import argparse

from lrdopt._kernels import BACKEND, available_backends
from lrdopt._kernels.bench import format_rows, run_benchmark


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--elements", type=int, default=1_000_000,
                        help="parameter tensor size")
    parser.add_argument("--steps", type=int, default=20,
                        help="timed steps per measurement")
    args = parser.parse_args()
    print(f"active backend: {BACKEND}; available: {available_backends()}")
    rows = run_benchmark(elements=args.elements, steps=args.steps)
    print(format_rows(rows))


if __name__ == "__main__":
    main()
