"""Time the census hot loops with the numba kernels and the numpy fallback.

    python benchmarks/bench_census.py --max-product 2000000 --repeat 3

The numba timings exclude compilation (one warm-up call on a small range).
"""
import argparse
import statistics
import time

import numpy as np

from triquot import _kernels


def timed(fn, repeat):
    samples = []
    out = None
    for _ in range(repeat):
        start = time.perf_counter()
        out = fn()
        samples.append(time.perf_counter() - start)
    return min(samples), statistics.median(samples), out


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--max-product", type=int, default=2_000_000)
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--no-even-filter", action="store_true")
    args = ap.parse_args(argv)
    n = args.max_product
    even = not args.no_even_filter

    # warm up the jit so compilation is not timed
    _kernels.scan_products(8, 1000, even, spf=_kernels.spf_sieve(1000, "numba"), backend="numba")

    rows = []
    results = {}
    for backend in ("numba", "numpy"):
        best, med, spf = timed(lambda: _kernels.spf_sieve(n, backend), args.repeat)
        rows.append((f"spf sieve N={n}", backend, best, med))
        best, med, out = timed(
            lambda: _kernels.scan_products(8, n + 1, even, spf=spf, backend=backend), args.repeat)
        rows.append((f"product scan N={n}", backend, best, med))
        results[backend] = out
    same = (np.array_equal(results["numba"][0], results["numpy"][0])
            and np.array_equal(results["numba"][1], results["numpy"][1]))

    print(f"{'kernel':<28}{'backend':<10}{'best s':>10}{'median s':>10}")
    for name, backend, best, med in rows:
        print(f"{name:<28}{backend:<10}{best:>10.3f}{med:>10.3f}")
    print(f"pairs found: {results['numba'][0].shape[0]}; backends agree: {same}")


if __name__ == "__main__":
    main()
