"""Latin hypercube designs and labeled, reproducible random streams."""

from __future__ import annotations

import hashlib

import numpy as np

from .benchmarks import Bounds

__all__ = ["latin_hypercube", "spawn_stream"]


def latin_hypercube(n: int, d: int, b: Bounds, rng: np.random.Generator) -> np.ndarray:
    """Sample an n x d Latin hypercube design over the box.

    Each dimension is split into n equal bins; an independent uniform
    permutation assigns exactly one sample to each bin, placed uniformly
    within the bin.
    """
    if n < 1 or d < 1:
        raise ValueError(f"need n >= 1 and d >= 1, got n={n}, d={d}")
    cells = np.empty((n, d))
    for j in range(d):
        cells[:, j] = rng.permutation(n)
    unit = (cells + rng.random((n, d))) / n
    return b.lower + unit * b.width


def spawn_stream(master_seed: int, label: str) -> np.random.Generator:
    """Derive a deterministic, label-independent substream of the master seed.

    Identical (seed, label) pairs yield identical streams; distinct labels
    yield statistically independent streams. The label is folded in through
    a SHA-256 digest so the mapping is stable across platforms and runs.
    """
    if master_seed < 0:
        raise ValueError(f"master seed must be non-negative, got {master_seed}")
    digest = hashlib.sha256(label.encode("utf-8")).digest()
    words = [int.from_bytes(digest[i : i + 4], "little") for i in range(0, 16, 4)]
    return np.random.default_rng(np.random.SeedSequence([master_seed, *words]))
