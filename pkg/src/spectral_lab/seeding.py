"""Reproducible per-trial seeds.

Seeds are derived with the splitmix64 finalizer (Steele, Lea and Flood):

    z += 0x9E3779B97F4A7C15
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
    z = (z ^ (z >> 27)) * 0x94D049BB133111EB
    z ^= z >> 31

all modulo 2**64.  ``derive_seed(seed, *keys)`` folds each key into the
state in turn, so a trial stream depends only on its own coordinates.
"""

from __future__ import annotations

import zlib

MASK64 = 0xFFFFFFFFFFFFFFFF
GOLDEN = 0x9E3779B97F4A7C15


def splitmix64(z: int) -> int:
    z = (z + GOLDEN) & MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return z ^ (z >> 31)


def derive_seed(seed: int, *keys) -> int:
    """Mix ``seed`` with integer or string keys into a 64-bit seed."""
    state = splitmix64(seed & MASK64)
    for key in keys:
        if isinstance(key, str):
            key = zlib.crc32(key.encode())  # stable across runs, unlike hash()
        state = splitmix64(state ^ (key & MASK64))
    return state
