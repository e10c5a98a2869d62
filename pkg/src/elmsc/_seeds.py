"""Deterministic RNG derivation shared by the generator, solver, and k-means."""

import numpy as np

_MASK64 = (1 << 64) - 1


def rng_from(seed, *stream):
    """PCG64 generator for an integer seed and an optional derived stream key.

    The seed is reduced modulo 2**64 so negative seeds are accepted; distinct
    stream keys give independent, reproducible streams for the same seed.
    """
    ss = np.random.SeedSequence(entropy=int(seed) & _MASK64, spawn_key=tuple(stream))
    return np.random.default_rng(ss)
