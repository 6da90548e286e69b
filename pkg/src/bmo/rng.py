"""Portable, seedable random streams.

Runs must be bit-reproducible from their seed alone, so the generator is
pinned to a published small-state design (splitmix64 seeding a
xoshiro256**) instead of whatever the host's numpy/random happens to be.
All state is plain 64-bit integer arithmetic; every draw is defined
exactly, including the mapping to doubles.
"""

from __future__ import annotations

import math

_MASK64 = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15

# Stream tags: one independent generator per purpose so that, e.g., adding
# sensor noise never shifts the selection stream.
STREAM_INIT = 1
STREAM_SELECT = 2
STREAM_NOISE = 3


def _splitmix64(state: int):
    """Yield the splitmix64 sequence starting from ``state``."""
    while True:
        state = (state + _GOLDEN) & _MASK64
        z = state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
        yield z ^ (z >> 31)


class Xoshiro256StarStar:
    """xoshiro256** 1.0 (Blackman & Vigna), 64-bit output."""

    __slots__ = ("s0", "s1", "s2", "s3")

    def __init__(self, s0: int, s1: int, s2: int, s3: int):
        if not (s0 | s1 | s2 | s3):
            raise ValueError("xoshiro256** state must not be all zero")
        self.s0, self.s1, self.s2, self.s3 = s0, s1, s2, s3

    def next_u64(self) -> int:
        s1 = self.s1
        x = (s1 * 5) & _MASK64
        result = (((x << 7) | (x >> 57)) & _MASK64) * 9 & _MASK64
        t = (s1 << 17) & _MASK64
        s2 = self.s2 ^ self.s0
        s3 = self.s3 ^ s1
        self.s1 = s1 ^ s2
        self.s0 = self.s0 ^ s3
        self.s2 = s2 ^ t
        self.s3 = ((s3 << 45) | (s3 >> 19)) & _MASK64
        return result

    def uniform(self) -> float:
        """Double in [0, 1) from the top 53 bits of one draw."""
        return (self.next_u64() >> 11) * 1.1102230246251565e-16  # 2**-53

    def normal(self) -> float:
        """Standard normal via Box-Muller; consumes exactly two draws."""
        u1 = 1.0 - self.uniform()  # (0, 1], keeps log() finite
        u2 = self.uniform()
        return math.sqrt(-2.0 * math.log(u1)) * math.cos(2.0 * math.pi * u2)


def stream(seed: int, tag: int) -> Xoshiro256StarStar:
    """Derive an independent generator for (seed, purpose tag).

    The 256-bit state is filled from splitmix64 keyed on seed XOR a
    tag-dependent constant, per the generator authors' seeding advice.
    """
    sm = _splitmix64((seed ^ (tag * _GOLDEN)) & _MASK64)
    return Xoshiro256StarStar(next(sm), next(sm), next(sm), next(sm))
