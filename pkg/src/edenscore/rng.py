"""Seed handling.

All Monte Carlo streams in this package run on counter-based Philox
generators. Child seeds are derived with ``numpy.random.SeedSequence``
spawn keys, which is the documented, collision-resistant mixing function;
the derivation is stable across platforms and numpy versions.
"""

from __future__ import annotations

import numpy as np


def derive_seed(base_seed: int, *path: int) -> int:
    """Derive a child seed from ``base_seed`` and an integer key path.

    Distinct paths give statistically independent streams. Deterministic:
    the same (base_seed, path) always yields the same child seed.
    """
    ss = np.random.SeedSequence(entropy=int(base_seed), spawn_key=tuple(int(k) for k in path))
    return int(ss.generate_state(1, dtype=np.uint64)[0])


def make_rng(seed: int) -> np.random.Generator:
    """Counter-based generator for a seed; identical streams on every platform."""
    return np.random.Generator(np.random.Philox(key=int(seed)))
