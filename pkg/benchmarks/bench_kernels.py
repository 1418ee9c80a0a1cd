"""Compiled vs pure-Python series product.

    python3 benchmarks/bench_kernels.py [--repeat 5]

Both kernels run on the same operands inside one process; results are
checked equal before any timing is reported.
"""

import argparse
import timeit

from vatwist import NilScalar, PuiseuxSeries, kernels, zeta
from vatwist import _kernels_py

try:
    from vatwist import _kernels as _compiled
except ImportError:
    _compiled = None


def operand(length, order, conductor, seed):
    terms = {}
    for m in range(length):
        comps = [zeta(conductor, (seed + m * k) % conductor) * ((m + k + seed) % 7 - 3) for k in range(order)]
        terms[m] = NilScalar(order, comps)
    return PuiseuxSeries(terms, order=order, trunc=length - 1)


CASES = [
    ("rational, order 1, 200 terms", 200, 1, 1),
    ("rational, order 3, 120 terms", 120, 3, 1),
    ("Q(zeta_12), order 2, 60 terms", 60, 2, 12),
]


def run_with(kernel, f, g):
    saved = kernels.graded_convolve
    kernels.graded_convolve = kernel
    try:
        return f * g
    finally:
        kernels.graded_convolve = saved


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    print(f"default backend: {kernels.BACKEND}")
    if _compiled is None:
        print("compiled kernel not built; timing the Python kernel only")
    print(f"{'case':32s} {'python':>10s} {'cython':>10s} {'speedup':>8s}")
    for label, length, order, N in CASES:
        f, g = operand(length, order, N, 1), operand(length, order, N, 2)
        py = min(timeit.repeat(lambda: run_with(_kernels_py.graded_convolve, f, g), number=1, repeat=args.repeat))
        if _compiled is None:
            print(f"{label:32s} {py:10.4f} {'-':>10s} {'-':>8s}")
            continue
        assert run_with(_compiled.graded_convolve, f, g) == run_with(_kernels_py.graded_convolve, f, g)
        cy = min(timeit.repeat(lambda: run_with(_compiled.graded_convolve, f, g), number=1, repeat=args.repeat))
        print(f"{label:32s} {py:10.4f} {cy:10.4f} {py / cy:7.1f}x")


if __name__ == "__main__":
    main()
