"""SplitMix64, the generator behind every seeded draw in this package.

SplitMix64 is counter based: the k-th output is ``mix(seed + k * GAMMA)``
with the finalizer below, so streams are reproducible bit for bit in any
language with 64-bit unsigned arithmetic.

Derived draws:

* ``integer(lo, hi)``: rejection sampling on ``next_u64() % span`` with the
  biased tail ``[2^64 - 2^64 % span, 2^64)`` discarded.
* ``uniform()``: ``(next_u64() >> 11) * 2^-53``.
"""

from __future__ import annotations

MASK64 = (1 << 64) - 1
GAMMA = 0x9E3779B97F4A7C15


class SplitMix64:
    def __init__(self, seed: int):
        self.state = seed & MASK64

    def next_u64(self) -> int:
        self.state = (self.state + GAMMA) & MASK64
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
        return z ^ (z >> 31)

    def integer(self, lo: int, hi: int) -> int:
        """Uniform integer in the closed range ``[lo, hi]``."""
        if lo > hi:
            raise ValueError(f"empty range [{lo}, {hi}]")
        span = hi - lo + 1
        if span > 1 << 64:
            raise ValueError("range wider than 2^64")
        limit = (1 << 64) - ((1 << 64) % span)
        while True:
            x = self.next_u64()
            if x < limit:
                return lo + x % span

    def uniform(self) -> float:
        return (self.next_u64() >> 11) * 2.0**-53
