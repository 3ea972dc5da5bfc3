#!/usr/bin/env python3
"""Benchmark the numba kernels against their pure-numpy fallbacks.

Run from the repository root:

    python3 benchmarks/bench_kernels.py [--repeat 3]

Each kernel is warmed once per backend (numba JIT compilation is excluded
from the timings), then the best of --repeat wall-clock timings is reported
together with the numba speedup.
"""

import argparse
import time

import numpy as np

from tracepair import _kernels


def best_time(fn, repeat):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def bench_sieve(impl):
    return lambda: impl["sieve"](10_000_000, 1 << 20)


def bench_m_brute(impl):
    def run():
        total = 0
        for t in range(32):
            for u in range(1, 32, 2):
                total += impl["m_brute"](t, u, 32)
        return total

    return run


def bench_m_values(impl):
    def run():
        acc = 0
        for t in (0, 1, 2, 3):
            _, m = impl["m_values"](t, 3, 9, 1, 3 ** 9)
            acc += int(m[0])
        return acc

    return run


def bench_class_numbers(impl):
    discs = np.array([-4 * p for p in _kernels.sieve(20_000) if p > 3], dtype=np.int64)
    return lambda: impl["class_number_batch"](discs)


def bench_traces(impl):
    primes = _kernels.sieve(30_000)
    primes = primes[primes > 3]
    return lambda: impl["trace_batch"](-2, 3, primes)


BENCHES = [
    ("sieve to 1e7", bench_sieve),
    ("m_brute grid q=32", bench_m_brute),
    ("m_values at 3^9", bench_m_values),
    ("class numbers h(-4p), p<2e4", bench_class_numbers),
    ("curve traces to 3e4", bench_traces),
]


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--repeat", type=int, default=3)
    args = parser.parse_args()

    backends = sorted(_kernels.IMPLS)
    print(f"backends: {', '.join(backends)} (active: {_kernels.backend()})")
    header = f"{'kernel':32s}" + "".join(f"{b:>12s}" for b in backends)
    if len(backends) == 2:
        header += f"{'speedup':>10s}"
    print(header)
    for name, make in BENCHES:
        times = {}
        for backend in backends:
            fn = make(_kernels.IMPLS[backend])
            fn()  # warm-up / JIT
            times[backend] = best_time(fn, args.repeat)
        row = f"{name:32s}" + "".join(f"{times[b]:>11.4f}s" for b in backends)
        if len(backends) == 2:
            row += f"{times['numpy'] / times['numba']:>9.1f}x"
        print(row)


if __name__ == "__main__":
    main()
