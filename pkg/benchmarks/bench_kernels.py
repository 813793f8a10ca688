#!/usr/bin/env python3
"""Compare the compiled similarity kernel against the numpy fallback.

Workloads mirror real scoring: small token groups (a few tokens per
descriptor category) at sentence-embedding dimensions, plus a larger
batch shape. Run after building the extension:

    python benchmarks/bench_kernels.py
"""

from __future__ import annotations

import timeit

import numpy as np

from aces import _kernel_py
from aces import kernels

try:
    from aces import _kernel

    HAVE_COMPILED = True
except ImportError:
    HAVE_COMPILED = False

# (candidate tokens, reference tokens, dimension, repeats)
WORKLOADS = [
    ("category 1x4    d=384", 1, 4, 384, 20000),
    ("category 3x8    d=384", 3, 8, 384, 20000),
    ("category 5x20   d=384", 5, 20, 384, 5000),
    ("category 5x20   d=768", 5, 20, 768, 5000),
    ("batch    64x256 d=384", 64, 256, 384, 50),
]


def unit_rows(rng, n, d):
    matrix = rng.standard_normal((n, d))
    return np.ascontiguousarray(matrix / np.linalg.norm(matrix, axis=1, keepdims=True))


def best_of(function, repeats, number=3):
    return min(timeit.repeat(function, number=number, repeat=repeats)) / number


def main() -> None:
    if not HAVE_COMPILED:
        print("compiled kernel not built; showing numpy fallback only")
    print(f"active implementation: {kernels.active_implementation()}\n")
    header = f"{'workload':<24}{'technique':<11}{'numpy':>12}{'compiled':>12}{'speedup':>9}"
    print(header)
    print("-" * len(header))

    rng = np.random.default_rng(0)
    for name, m, n, d, repeats in WORKLOADS:
        cand = unit_rows(rng, m, d)
        ref = unit_rows(rng, n, d)
        loops = max(1, repeats // 100)
        for technique, code in (("cosine", 0), ("euclidean", 1)):
            numpy_seconds = best_of(lambda: _kernel_py.pr_re(cand, ref, code), 5, loops)
            if HAVE_COMPILED:
                compiled_seconds = best_of(lambda: _kernel.pr_re(cand, ref, code), 5, loops)
                check_a = _kernel.pr_re(cand, ref, code)
                check_b = _kernel_py.pr_re(cand, ref, code)
                assert abs(check_a[0] - check_b[0]) < 1e-9
                assert abs(check_a[1] - check_b[1]) < 1e-9
                speedup = numpy_seconds / compiled_seconds
                print(
                    f"{name:<24}{technique:<11}{numpy_seconds * 1e6:>10.1f}us"
                    f"{compiled_seconds * 1e6:>10.1f}us{speedup:>8.2f}x"
                )
            else:
                print(f"{name:<24}{technique:<11}{numpy_seconds * 1e6:>10.1f}us{'-':>12}{'-':>9}")


if __name__ == "__main__":
    main()
