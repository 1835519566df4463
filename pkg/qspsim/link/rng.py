"""Seeded random streams.

Every random quantity is drawn from a generator keyed by
``(seed, stream tag, index...)``. Two calls with the same key produce the same
numbers no matter which worker thread runs them or in which order.
"""

import zlib

import numpy as np

# Stream tags keep the geometry, pilot, and per-trial draws disjoint.
GEOMETRY = "geometry"
PILOTS = "pilots"
TRIAL = "trial"
QTP_ASSIGNMENT = "qtp-assignment"
ZETA_STATS = "zeta-stats"


def _tag_entropy(tag: str) -> int:
    return zlib.crc32(tag.encode("utf-8"))


def stream(seed: int, tag: str, *index: int) -> np.random.Generator:
    """Return an independent generator for ``(seed, tag, *index)``."""
    if seed is None:
        raise ValueError("seed is required; ambient randomness is not allowed")
    entropy = [int(seed), _tag_entropy(tag), *(int(i) for i in index)]
    return np.random.default_rng(np.random.SeedSequence(entropy))


def complex_normal(rng: np.random.Generator, shape, variance: float = 1.0) -> np.ndarray:
    """Draw circularly-symmetric CN(0, variance) samples."""
    scale = np.sqrt(variance / 2.0)
    return scale * (rng.standard_normal(shape) + 1j * rng.standard_normal(shape))
