"""Seeded, splittable 64-bit PRNG.

All randomized pieces of the toolkit (graph generators, the decomposition
solver) draw from this generator.  It is splittable: child streams are
derived from the parent seed plus a tag, so adding a new consumer never
perturbs the draws of existing ones.  The stream layout is part of the
reproducibility contract of the repo.
"""

from __future__ import annotations

import hashlib
import math

MASK64 = (1 << 64) - 1
_GAMMA = 0x9E3779B97F4A7C15


def mix64(z: int) -> int:
    """SplitMix64 finalizer."""
    z &= MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return (z ^ (z >> 31)) & MASK64


def _tag_to_int(tag) -> int:
    data = repr(tag).encode()
    return int.from_bytes(hashlib.blake2b(data, digest_size=8).digest(), "little")


class SplitMix64:
    """SplitMix64 stream with deterministic splitting."""

    __slots__ = ("_seed", "_state")

    def __init__(self, seed: int):
        self._seed = seed & MASK64
        self._state = seed & MASK64

    def split(self, tag) -> "SplitMix64":
        """Child stream derived from the *initial* seed and a tag.

        Does not consume any state of this stream.
        """
        return SplitMix64(mix64(mix64(self._seed) ^ _tag_to_int(tag)))

    def next_u64(self) -> int:
        self._state = (self._state + _GAMMA) & MASK64
        return mix64(self._state)

    def randint(self, n: int) -> int:
        """Uniform integer in [0, n), bias-free via rejection."""
        if n <= 0:
            raise ValueError("randint bound must be positive")
        limit = (1 << 64) - ((1 << 64) % n)
        while True:
            r = self.next_u64()
            if r < limit:
                return r % n

    def random(self) -> float:
        """Uniform float in [0, 1)."""
        return (self.next_u64() >> 11) * 2.0**-53

    def geometric(self, p: float) -> int:
        """Geometric sample on {1, 2, ...} with mean 1/p (p clamped to (0, 1])."""
        if p >= 1.0:
            return 1
        if p <= 0.0:
            raise ValueError("geometric rate must be positive")
        u = self.random()
        # P(X >= k) = (1-p)^(k-1); inverse transform
        return int(math.ceil(math.log1p(-u) / math.log1p(-p)))

    def shuffle(self, seq) -> None:
        """In-place Fisher-Yates shuffle."""
        for i in range(len(seq) - 1, 0, -1):
            j = self.randint(i + 1)
            seq[i], seq[j] = seq[j], seq[i]
