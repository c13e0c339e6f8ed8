"""Deterministic derivation of per-trajectory noise-stream keys.

Every stochastic run is keyed by a 64-bit master seed. Independent streams
(trajectories, background/signal ensemble pair, sweep grid points) get their
own key through a counter-based hash of (master seed, tag), so results never
depend on scheduling, worker count, or execution order.
"""

from __future__ import annotations

import numpy as np

MASK64 = (1 << 64) - 1
GOLDEN = 0x9E3779B97F4A7C15


def mix64(z: int) -> int:
    """SplitMix64 finalizer: a bijective avalanche mix on 64-bit integers."""
    z &= MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return z ^ (z >> 31)


def split_seed(master_seed: int, tag: int) -> int:
    """Derive an independent 64-bit stream key from a master seed and a tag."""
    return mix64(mix64(master_seed) ^ mix64((tag + GOLDEN) & MASK64))


def trajectory_seeds(master_seed: int, n_runs: int) -> np.ndarray:
    """Stream keys for trajectories 0..n_runs-1 of one ensemble.

    Key k depends only on (master_seed, k): the first m keys of an n-run
    ensemble equal the keys of an m-run ensemble with the same master seed.
    """
    base = mix64(master_seed)
    keys = np.empty(n_runs, dtype=np.uint64)
    for k in range(n_runs):
        keys[k] = split_seed(base, k)
    return keys
