"""Counter-based random streams.

All randomness in the package flows through Philox generators keyed by
(master seed, path...).  Streams for different paths are statistically
independent, order-independent, and safe to draw from in parallel workers.
"""

from __future__ import annotations

import numpy as np

__all__ = ["stream"]


def stream(seed: int, *path: int) -> np.random.Generator:
    """A Philox generator for the given (seed, path) coordinates.

    Path elements may be arbitrarily large; each is split into 32-bit limbs
    (with a length marker) so distinct paths never collide.
    """
    key: list[int] = []
    for p in path:
        p = int(p)
        limbs = []
        while True:
            limbs.append(p & 0xFFFFFFFF)
            p >>= 32
            if p == 0:
                break
        key.append(len(limbs))
        key.extend(limbs)
    ss = np.random.SeedSequence(entropy=int(seed), spawn_key=tuple(key))
    return np.random.Generator(np.random.Philox(ss))
