"""Deterministic randomness contract shared by the whole package.

Every stochastic routine draws from a ``numpy.random.Generator`` backed by
the PCG64 bit generator (``numpy.random.default_rng``), which is fully
specified and platform independent.  Two further pieces are fixed here so
that sampled trajectories reproduce bit-for-bit across machines:

- ``derive_seed(base, i)``: per-trial seeds come from a SplitMix64 finalizer
  applied to ``base + (i + 1) * GOLDEN_GAMMA`` in wrapping 64-bit arithmetic.
- ``draw_index(rng, probs)``: every categorical draw consumes exactly one
  uniform double and inverts the cumulative distribution.
"""

import numpy as np

_MASK64 = (1 << 64) - 1
GOLDEN_GAMMA = 0x9E3779B97F4A7C15


def as_generator(rng: "int | np.random.Generator") -> np.random.Generator:
    """Coerce an integer seed (any 64-bit value, signed ok) or Generator."""
    if isinstance(rng, np.random.Generator):
        return rng
    return np.random.default_rng(int(rng) & _MASK64)


def derive_seed(base_seed: int, index: int) -> int:
    """SplitMix64 mix of (base_seed, index); stable across platforms."""
    z = (int(base_seed) + (index + 1) * GOLDEN_GAMMA) & _MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return z ^ (z >> 31)


def draw_index(rng: np.random.Generator, probs: np.ndarray) -> int:
    """Draw one index from a probability table via inverse CDF.

    Consumes a single uniform double.  Cumulative sums are clamped so a
    u close to 1.0 cannot fall off the end of a table whose float sum is
    marginally below 1.
    """
    cdf = np.cumsum(probs)
    cdf[-1] = 1.0
    return int(np.searchsorted(cdf, rng.random(), side="right"))
