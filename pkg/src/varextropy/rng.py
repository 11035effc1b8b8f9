"""Reproducible per-replicate random substreams.

Every Monte Carlo replicate ``r`` of a run seeded with ``seed`` gets its own
generator built from ``SeedSequence(entropy=seed, spawn_key=(r,))`` driving a
counter-based Philox bit generator.  The construction is platform-independent
and gives statistically independent streams, so results do not depend on how
replicates are partitioned across batches or workers: replicate r's draws are
a pure function of (seed, r).
"""

from __future__ import annotations

import numpy as np

__all__ = ["rng_substream", "draw_sorted_sample"]


def rng_substream(seed: int, replicate: int) -> np.random.Generator:
    """Independent, reproducible uniform generator for one replicate."""
    ss = np.random.SeedSequence(entropy=seed, spawn_key=(replicate,))
    return np.random.Generator(np.random.Philox(ss))


def draw_sorted_sample(sampler, seed: int, replicate: int, n: int):
    """Draw one sorted, tie-free sample from a replicate's substream.

    ``sampler(rng, n)`` produces the raw draws.  Exact floating-point ties
    (probability ~0 for continuous laws, but possible in binary64) void the
    replicate: the whole sample is re-drawn from the same substream so the
    spacing statistics stay total.  Returns ``(sorted_values, redraws)``.
    """
    rng = rng_substream(seed, replicate)
    redraws = 0
    while True:
        x = np.sort(sampler(rng, n))
        if x.shape[0] < 2 or np.all(np.diff(x) > 0.0):
            return x, redraws
        redraws += 1
