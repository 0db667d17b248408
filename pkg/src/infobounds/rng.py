"""Counter-based seed splitting.

Every random draw in the package comes from ``substream(seed, *key)``.  The
key is a tuple of small non-negative integers (a stream tag followed by
counters), so adding trials never perturbs the draws of earlier blocks and
partitioned work reproduces the serial result exactly.
"""

from __future__ import annotations

import zlib

import numpy as np

BLOCK = 1 << 16
MASK64 = (1 << 64) - 1


def tag(name: str) -> int:
    """Stable integer tag for a named stream."""
    return zlib.crc32(name.encode("utf-8"))


def substream(seed: int, *key: int) -> np.random.Generator:
    seed = int(seed) & MASK64
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=tuple(int(k) for k in key)))


def blocks(trials: int, block: int = BLOCK):
    """Yield (index, size) pairs that partition ``trials`` into fixed blocks."""
    start, idx = 0, 0
    while start < trials:
        size = min(block, trials - start)
        yield idx, size
        start += size
        idx += 1


def derive_seed(seed: int, *key: int) -> int:
    """A 64-bit child seed, for APIs that take an integer seed."""
    ss = np.random.SeedSequence(int(seed) & MASK64, spawn_key=tuple(int(k) for k in key))
    return int(ss.generate_state(1, dtype=np.uint64)[0])
