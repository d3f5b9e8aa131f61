"""Deterministic seed-splitting for parallel Monte Carlo.

Every stochastic entry point takes either a ``numpy.random.Generator`` or an
integer seed.  Trials are split off a master seed with ``spawn_rng`` so that
disjoint trial indices never share generator state, regardless of how the
trials are distributed over workers.

The generator is PCG64 keyed through ``numpy.random.SeedSequence`` with the
trial index as spawn key; this is the reproducibility contract of the whole
package (documented in the README).
"""
from __future__ import annotations

import numpy as np


def spawn_rng(master_seed: int, stream: int = 0) -> np.random.Generator:
    """Child generator for (master_seed, stream); streams are independent."""
    ss = np.random.SeedSequence(entropy=int(master_seed), spawn_key=(int(stream),))
    return np.random.default_rng(ss)


def as_rng(seed_or_rng) -> np.random.Generator:
    """Accept an int seed, a Generator, or None (fresh nondeterministic rng)."""
    if isinstance(seed_or_rng, np.random.Generator):
        return seed_or_rng
    if seed_or_rng is None:
        return np.random.default_rng()
    return spawn_rng(int(seed_or_rng))
