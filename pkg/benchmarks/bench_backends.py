"""Benchmark the compiled statevector kernels against the pure-NumPy fallback.

Times full depth-2 expectation evaluations (the optimizer's hot path) at a
few qubit counts and reports the per-evaluation cost and speedup.

Run:  python3 benchmarks/bench_backends.py
"""

import math
import time

import numpy as np

from swarmcut import generate_er
from swarmcut.graphs import cut_values_all_masks
from swarmcut import _statevec_py

try:
    from swarmcut import _statevec_cy
except ImportError:
    _statevec_cy = None


def evaluate(impl, values, tables, betas, n):
    size = 1 << n
    amps = np.full(size, 1.0 / math.sqrt(size), dtype=np.complex128)
    for table, beta in zip(tables, betas):
        impl.apply_phase_table(amps, values, table)
        impl.apply_mixer(amps, n, beta)
    return impl.expectation_value(amps, values)


def time_backend(impl, values, tables, betas, n, repeats):
    evaluate(impl, values, tables, betas, n)  # warm up
    start = time.perf_counter()
    for _ in range(repeats):
        result = evaluate(impl, values, tables, betas, n)
    return (time.perf_counter() - start) / repeats, result


def main():
    rng = np.random.default_rng(7)
    depth = 2
    print(f"depth-{depth} expectation evaluation, mean over repeated runs")
    print(f"{'n':>3} {'python':>12} {'cython':>12} {'speedup':>8}")
    for n in (8, 10, 12, 14, 16):
        g = generate_er(n, 0.5, seed=n)
        values = cut_values_all_masks(g)
        gammas = rng.uniform(-np.pi, np.pi, depth)
        betas = rng.uniform(-np.pi, np.pi, depth)
        tables = [np.exp(-1j * gm * np.arange(values.max() + 1, dtype=float)) for gm in gammas]
        repeats = max(3, 2 ** (18 - n))
        t_py, r_py = time_backend(_statevec_py, values, tables, betas, n, repeats)
        if _statevec_cy is None:
            print(f"{n:>3} {t_py * 1e6:>10.1f}us {'(not built)':>12}")
            continue
        t_cy, r_cy = time_backend(_statevec_cy, values, tables, betas, n, repeats)
        assert abs(r_py - r_cy) < 1e-9
        print(f"{n:>3} {t_py * 1e6:>10.1f}us {t_cy * 1e6:>10.1f}us {t_py / t_cy:>7.1f}x")


if __name__ == "__main__":
    main()
