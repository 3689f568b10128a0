"""Deterministic seed derivation.

Every randomized operation in this package takes an explicit integer seed.
Batch runners derive one child seed per trial from a master seed, so results
are identical regardless of execution order or parallelism degree.
"""

from __future__ import annotations

import numpy as np

__all__ = ["derive_seed", "make_rng"]


def derive_seed(master_seed: int, *path: int) -> int:
    """Derive a child seed from a master seed and an index path.

    Stable across processes: only depends on (master_seed, *path).
    """
    ss = np.random.SeedSequence([int(master_seed), *[int(p) for p in path]])
    return int(ss.generate_state(1, np.uint64)[0])


def make_rng(seed: int) -> np.random.Generator:
    return np.random.default_rng(int(seed))
