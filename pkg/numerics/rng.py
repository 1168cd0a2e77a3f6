"""
Seeded random streams.

All randomness (random test points, random frequency profiles, random tile subsets)
comes from numpy's Philox counter-based generator keyed by the run seed and a
stream index, so a sequence is determined by (seed, stream) alone and does not
depend on any library default or global state.
"""

import numpy as np

from numerics.errors import DomainError

# named stream indices
STREAM_POINTS = 0
STREAM_PROFILE = 1
STREAM_SUBSETS = 2
STREAM_WEIGHTS = 3

_U64 = 1 << 64


def make_generator(seed: int, stream: int = 0) -> np.random.Generator:
    """Return the Philox generator keyed by seed (low 64 bits) and stream (high 64 bits)."""
    if not 0 <= seed < _U64:
        raise DomainError(f"seed must be an unsigned 64-bit integer, got {seed}", "seed")
    if not 0 <= stream < _U64:
        raise DomainError(f"stream must be an unsigned 64-bit integer, got {stream}", "stream")
    return np.random.Generator(np.random.Philox(key=seed + (stream << 64)))


def random_points_in_ball(rng: np.random.Generator, count: int, d: int, radius: float) -> np.ndarray:
    """Uniform points in the closed ball of the given radius in R^d."""
    directions = rng.standard_normal((count, d))
    directions /= np.linalg.norm(directions, axis=1, keepdims=True)
    radii = radius * rng.random(count) ** (1.0 / d)
    return directions * radii[:, None]
