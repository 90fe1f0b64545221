"""Deterministic PRNG for seeded sampling, reproducible across languages.

SplitMix64 (Steele, Lea, Flood 2014).  State update and output mixing use
the fixed 64-bit constants below; given the same seed the stream is
bit-identical on every platform, so sampled campaigns can be replayed from
the seed recorded in a report.

    state += 0x9E3779B97F4A7C15
    z = state
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
    z = (z ^ (z >> 27)) * 0x94D049BB133111EB
    return z ^ (z >> 31)

Bounded draws use rejection sampling on the top multiple of the bound, so
they are unbiased and still deterministic.
"""

from __future__ import annotations

_MASK = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15
_MIX1 = 0xBF58476D1CE4E5B9
_MIX2 = 0x94D049BB133111EB


class SplitMix64:
    def __init__(self, seed: int):
        self.state = seed & _MASK

    def next_u64(self) -> int:
        self.state = (self.state + _GOLDEN) & _MASK
        z = self.state
        z = ((z ^ (z >> 30)) * _MIX1) & _MASK
        z = ((z ^ (z >> 27)) * _MIX2) & _MASK
        return z ^ (z >> 31)

    def below(self, n: int) -> int:
        """Uniform integer in [0, n)."""
        if n <= 0:
            raise ValueError("bound must be positive")
        limit = (1 << 64) - ((1 << 64) % n)
        while True:
            v = self.next_u64()
            if v < limit:
                return v % n

    def choice(self, seq):
        return seq[self.below(len(seq))]

    def codes(self, n: int, q: int) -> tuple[int, ...]:
        """n independent uniform draws from [0, q)."""
        return tuple(self.below(q) for _ in range(n))
