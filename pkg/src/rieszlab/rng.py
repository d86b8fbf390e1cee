"""Deterministic pseudo-random generator used by every instance generator.

SplitMix64: 64-bit state advanced by the golden-gamma constant, output
scrambled by two xor-shift multiplies.  The algorithm is fixed so that a
seed reproduces the same instances on any platform or implementation.
"""

from __future__ import annotations

from fractions import Fraction

_MASK = (1 << 64) - 1
_GAMMA = 0x9E3779B97F4A7C15


class SplitMix64:
    def __init__(self, seed: int):
        self._state = seed & _MASK

    def next_u64(self) -> int:
        self._state = (self._state + _GAMMA) & _MASK
        z = self._state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK
        return (z ^ (z >> 31)) & _MASK

    def next_below(self, n: int) -> int:
        """Uniform integer in [0, n) by rejection, so the split is unbiased."""
        if n <= 0:
            raise ValueError("need n > 0")
        limit = _MASK - (_MASK % n)
        while True:
            u = self.next_u64()
            if u < limit:
                return u % n

    def next_int(self, lo: int, hi: int) -> int:
        """Uniform integer in [lo, hi], inclusive."""
        return lo + self.next_below(hi - lo + 1)

    def next_float(self) -> float:
        """Uniform float in [0, 1) with 53 random bits."""
        return (self.next_u64() >> 11) * (2.0 ** -53)

    def next_fraction(self, max_num: int = 4, max_den: int = 4) -> Fraction:
        """Positive rational p/q with 1 <= p <= max_num, 1 <= q <= max_den."""
        return Fraction(self.next_int(1, max_num), self.next_int(1, max_den))

    def shuffle(self, items: list) -> list:
        """Fisher-Yates shuffle, in place; returns the list for convenience."""
        for i in range(len(items) - 1, 0, -1):
            j = self.next_below(i + 1)
            items[i], items[j] = items[j], items[i]
        return items

    def split(self) -> "SplitMix64":
        """Child generator with an independent stream."""
        return SplitMix64(self.next_u64())
