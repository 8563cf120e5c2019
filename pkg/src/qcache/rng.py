"""Portable deterministic PRNG used by every seeded builder in this package.

Seeded circuit generation, random graphs and the DE optimizer must produce
bit-identical streams on any platform, so we fix the generator rather than
relying on a runtime's default RNG.  The algorithm is xoshiro256** (Blackman &
Vigna), state-seeded with splitmix64.  All constants below are part of the
on-disk/reproducibility contract and are documented in the README.
"""

from __future__ import annotations

_MASK64 = (1 << 64) - 1

# splitmix64 constants
_SM_GAMMA = 0x9E3779B97F4A7C15
_SM_MUL1 = 0xBF58476D1CE4E5B9
_SM_MUL2 = 0x94D049BB133111EB


def _rotl(x: int, k: int) -> int:
    return ((x << k) | (x >> (64 - k))) & _MASK64


def _splitmix64_stream(seed: int):
    s = seed & _MASK64
    while True:
        s = (s + _SM_GAMMA) & _MASK64
        z = s
        z = ((z ^ (z >> 30)) * _SM_MUL1) & _MASK64
        z = ((z ^ (z >> 27)) * _SM_MUL2) & _MASK64
        yield z ^ (z >> 31)


class Rng:
    """xoshiro256** with a splitmix64-expanded seed."""

    __slots__ = ("_s0", "_s1", "_s2", "_s3")

    def __init__(self, seed: int):
        sm = _splitmix64_stream(seed)
        self._s0 = next(sm)
        self._s1 = next(sm)
        self._s2 = next(sm)
        self._s3 = next(sm)
        if self._s0 == self._s1 == self._s2 == self._s3 == 0:
            self._s0 = 1  # all-zero state is invalid for xoshiro

    def next_u64(self) -> int:
        result = (_rotl((self._s1 * 5) & _MASK64, 7) * 9) & _MASK64
        t = (self._s1 << 17) & _MASK64
        self._s2 ^= self._s0
        self._s3 ^= self._s1
        self._s1 ^= self._s2
        self._s0 ^= self._s3
        self._s2 ^= t
        self._s3 = _rotl(self._s3, 45)
        return result

    def random(self) -> float:
        """Uniform double in [0, 1) from the top 53 bits."""
        return (self.next_u64() >> 11) * (2.0**-53)

    def uniform(self, lo: float, hi: float) -> float:
        return lo + (hi - lo) * self.random()

    def randbelow(self, n: int) -> int:
        """Uniform integer in [0, n) via the multiply-shift reduction."""
        if n <= 0:
            raise ValueError("randbelow requires n >= 1")
        return (self.next_u64() * n) >> 64

    def choice(self, seq):
        return seq[self.randbelow(len(seq))]
