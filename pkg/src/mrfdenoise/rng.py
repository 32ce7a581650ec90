"""Pseudo-random number source used by every stochastic routine.

All randomness flows through numpy's PCG64 bit generator.  A run is fully
determined by one integer seed: ``make_rng(seed)`` builds the generator for a
single chain, and ``spawn_rngs(seed, n)`` derives independent per-chain
streams from the same root seed via ``numpy.random.SeedSequence.spawn``, so
multi-chain experiments are reproducible without manual seed arithmetic.
"""

from __future__ import annotations

import numpy as np

ALGORITHM = "numpy PCG64"


def make_rng(seed: int | None = None) -> np.random.Generator:
    """Return a PCG64-backed generator seeded from ``seed``."""
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed)))


def spawn_rngs(seed: int | None, n: int) -> list[np.random.Generator]:
    """Return ``n`` generators with independent streams derived from ``seed``."""
    if n < 0:
        raise ValueError(f"cannot spawn {n} generators")
    children = np.random.SeedSequence(seed).spawn(n)
    return [np.random.Generator(np.random.PCG64(c)) for c in children]
