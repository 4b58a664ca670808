"""Counter-based random streams for reproducible simulations.

Philox generators keyed by (seed, stream indices) through SeedSequence
spawn keys: per-step streams are independent of each other and of how
work is scheduled, so simulation output is byte-identical for a seed.
"""
from __future__ import annotations

import numpy as np


def philox(seed: int, *stream: int) -> np.random.Generator:
    ss = np.random.SeedSequence(entropy=int(seed),
                                spawn_key=tuple(int(s) for s in stream))
    return np.random.Generator(np.random.Philox(ss))
