"""Seedable, splittable PRNG: xoshiro256** seeded via splitmix64.

The generator is fixed bit-for-bit so that experiments are reproducible
across runs, platforms, and kernel backends (the compiled kernels implement
the identical algorithm).  Child streams for parallel or chunked work are
derived with `spawn_seed`, which is an O(1) jump along the splitmix64
sequence of the parent seed.
"""

from __future__ import annotations

ALGORITHM = "xoshiro256**"

_M64 = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15


def _mix64(z: int) -> int:
    z &= _M64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _M64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _M64
    return z ^ (z >> 31)


def splitmix64_stream(seed: int, count: int) -> list[int]:
    """First `count` outputs of the splitmix64 sequence started at `seed`."""
    out = []
    state = seed & _M64
    for _ in range(count):
        state = (state + _GOLDEN) & _M64
        out.append(_mix64(state))
    return out


def spawn_seed(seed: int, index: int) -> int:
    """Seed of the index-th child stream (splitmix64 output index+1)."""
    return _mix64((seed + (index + 1) * _GOLDEN) & _M64)


def _rotl(x: int, k: int) -> int:
    return ((x << k) | (x >> (64 - k))) & _M64


class Xoshiro256StarStar:
    """Pure-Python reference implementation of xoshiro256**."""

    __slots__ = ("s0", "s1", "s2", "s3")

    def __init__(self, seed: int):
        self.s0, self.s1, self.s2, self.s3 = splitmix64_stream(seed, 4)

    def next64(self) -> int:
        s0, s1, s2, s3 = self.s0, self.s1, self.s2, self.s3
        result = (_rotl((s1 * 5) & _M64, 7) * 9) & _M64
        t = (s1 << 17) & _M64
        s2 ^= s0
        s3 ^= s1
        s1 ^= s2
        s0 ^= s3
        s2 ^= t
        s3 = _rotl(s3, 45)
        self.s0, self.s1, self.s2, self.s3 = s0, s1, s2, s3
        return result

    def randbelow(self, bound: int) -> int:
        """Uniform integer in [0, bound) by rejection (no modulo bias)."""
        if bound <= 0:
            raise ValueError("bound must be positive")
        if bound == 1:
            return 0
        threshold = ((1 << 64) - bound) % bound  # == 2**64 mod bound
        while True:
            u = self.next64()
            if u >= threshold:
                return u % bound

    def random(self) -> float:
        """Uniform float in [0, 1) with 53 random bits."""
        return (self.next64() >> 11) * 2.0**-53
