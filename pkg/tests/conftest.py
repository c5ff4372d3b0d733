"""Shared helpers for the test-suite."""

import numpy as np

from mvconceal.frame_io import frame_from_planes


def random_frame(width, height, seed):
    """Fully random frame; chroma is random too so tests catch plane mixups."""
    rng = np.random.default_rng(seed)
    return frame_from_planes(
        rng.integers(0, 256, size=(height, width), dtype=np.uint8),
        rng.integers(0, 256, size=(height // 2, width // 2), dtype=np.uint8),
        rng.integers(0, 256, size=(height // 2, width // 2), dtype=np.uint8),
    )


def random_pair(width, height, seed):
    return random_frame(width, height, seed), random_frame(width, height, seed + 1)
