"""Benchmark the compiled Polya-Gamma kernel against the pure-Python one.

Usage: python3 benchmarks/bench_pg.py [n_draws]
"""

import sys
import time

import numpy as np

from dynnet import polya_gamma as pg


def bench(backend, c, repeats=3):
    best = float("inf")
    for _ in range(repeats):
        rng = np.random.default_rng(0)
        started = time.perf_counter()
        pg.sample_pg1(c, rng, backend=backend)
        best = min(best, time.perf_counter() - started)
    return best


def main():
    n = int(sys.argv[1]) if len(sys.argv) > 1 else 200_000
    c = np.concatenate(
        [
            np.zeros(n // 4),
            np.linspace(-3, 3, n // 4),
            np.full(n // 4, 1.0),
            np.linspace(-10, 10, n - 3 * (n // 4)),
        ]
    )
    backends = pg.available_backends()
    print(f"{n} PG(1, c) draws, backends: {', '.join(backends)}")
    times = {}
    for backend in backends:
        times[backend] = bench(backend, c)
        rate = n / times[backend]
        print(f"  {backend:>8}: {times[backend]:.3f}s  ({rate:,.0f} draws/s)")
    if "compiled" in times and "python" in times:
        print(f"  speedup: {times['python'] / times['compiled']:.1f}x")
        a = pg.sample_pg1(c, np.random.default_rng(1), backend="compiled")
        b = pg.sample_pg1(c, np.random.default_rng(1), backend="python")
        print(f"  bit-identical under a shared seed: {np.array_equal(a, b)}")


if __name__ == "__main__":
    main()
