"""Thread pool and seed-derivation helpers shared by the evaluation modules.

Parallelism is capped by the NILSPEC_THREADS environment variable. All
randomness flows through numpy SeedSequence spawning so results are
independent of worker count and chunking.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor

import numpy as np


def max_workers() -> int:
    """Worker cap: NILSPEC_THREADS if set, otherwise the CPU count."""
    env = os.environ.get("NILSPEC_THREADS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            pass
    return os.cpu_count() or 1


def parallel_map(fn, items):
    """Apply fn to items, possibly in a thread pool; order is preserved."""
    items = list(items)
    workers = min(max_workers(), len(items)) if items else 1
    if workers <= 1 or len(items) <= 1:
        return [fn(it) for it in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


def derived_rng(seed: int, *key: int) -> np.random.Generator:
    """Generator for (seed, key...): stable under threading and chunk order."""
    return np.random.default_rng(np.random.SeedSequence(entropy=seed, spawn_key=key))


def derived_seed(seed: int, *key: int) -> int:
    """A child integer seed for task `key` of a stream rooted at `seed`."""
    ss = np.random.SeedSequence(entropy=seed, spawn_key=key)
    return int(ss.generate_state(1, dtype=np.uint64)[0])
