#!/usr/bin/env python3
"""Timing harness for the recursion-based filter: runtime should grow
about linearly with chain length (K * nnz work), nowhere near cubically."""

import time

import numpy as np
import scipy.sparse as sp

from spectral_reasoner.spectral import ChebFilter, filter_fast


def chain_laplacian(n):
    ones = np.ones(n - 1)
    return sp.diags([np.r_[1.0, 2.0 * np.ones(n - 2), 1.0], -ones, -ones],
                    [0, -1, 1]).tocsr()


def median_ms(lap, filt, x, runs=50):
    filter_fast(lap, filt, x)
    times = []
    for _ in range(runs):
        t0 = time.perf_counter()
        filter_fast(lap, filt, x)
        times.append(time.perf_counter() - t0)
    return float(np.median(times)) * 1000.0


if __name__ == "__main__":
    rng = np.random.default_rng(0)
    filt = ChebFilter(coeffs=tuple(rng.uniform(-1, 1, 9)), lambda_max=4.0)
    base = None
    for n in (1_000, 10_000, 100_000):
        ms = median_ms(chain_laplacian(n), filt, rng.uniform(0, 1, n))
        ratio = "" if base is None else f"  ({ms / base:.1f}x the 1k time)"
        base = base or ms
        print(f"n={n:>7}: median {ms:8.3f} ms{ratio}")
