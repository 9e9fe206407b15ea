"""Deterministic pseudo-random generator used for weight init and shuffling.

xoshiro256** with splitmix64 seeding, implemented on plain Python integers so
streams are bit-identical across platforms and numpy versions. Streams are
split by name (fnv1a hash mixed into the seed), one stream per layer or
purpose, so adding a consumer never perturbs existing ones.
"""

from __future__ import annotations

import numpy as np

_MASK64 = (1 << 64) - 1


def _splitmix64(state: int) -> tuple[int, int]:
    state = (state + 0x9E3779B97F4A7C15) & _MASK64
    z = state
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return state, z ^ (z >> 31)


def _fnv1a64(text: str) -> int:
    h = 0xCBF29CE484222325
    for byte in text.encode("utf-8"):
        h = ((h ^ byte) * 0x100000001B3) & _MASK64
    return h


def _rotl(x: int, k: int) -> int:
    return ((x << k) | (x >> (64 - k))) & _MASK64


class Rng:
    """xoshiro256** generator seeded from a 64-bit integer."""

    def __init__(self, seed: int):
        self.seed = seed & _MASK64
        state = self.seed
        self._s = []
        for _ in range(4):
            state, out = _splitmix64(state)
            self._s.append(out)

    def split(self, name: str) -> "Rng":
        """Derive an independent stream identified by name."""
        return Rng(self.seed ^ _fnv1a64(name))

    def next_u64(self) -> int:
        s0, s1, s2, s3 = self._s
        result = (_rotl((s1 * 5) & _MASK64, 7) * 9) & _MASK64
        t = (s1 << 17) & _MASK64
        s2 ^= s0
        s3 ^= s1
        s1 ^= s2
        s0 ^= s3
        s2 ^= t
        s3 = _rotl(s3, 45)
        self._s = [s0, s1, s2, s3]
        return result

    def next_float(self) -> float:
        # top 53 bits -> uniform double in [0, 1)
        return (self.next_u64() >> 11) * (1.0 / (1 << 53))

    def uniform(self, low: float, high: float, shape: tuple[int, ...]) -> np.ndarray:
        n = 1
        for d in shape:
            n *= d
        values = np.empty(n, dtype=np.float64)
        for i in range(n):
            values[i] = self.next_float()
        return (low + (high - low) * values).reshape(shape)

    def shuffle(self, items: list) -> None:
        """In-place Fisher-Yates shuffle."""
        for i in range(len(items) - 1, 0, -1):
            j = self.next_u64() % (i + 1)
            items[i], items[j] = items[j], items[i]
