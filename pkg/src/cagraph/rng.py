"""Deterministic 64-bit random number generation with substream derivation.

Every randomized routine in this package draws from a SplitMix64 stream.
Replicate r of a run seeded with s uses the stream seeded by
``substream_seed(s, r)``, so replicates are independent and can be executed
in any order (or on any number of threads) without changing results.

The compiled kernels implement the identical arithmetic on ``uint64``;
outputs are bit-for-bit equal between the two backends.
"""

from __future__ import annotations

GOLDEN_GAMMA = 0x9E3779B97F4A7C15
_MASK = (1 << 64) - 1

# 2**-53; (k + 0.5) * 2**-53 for k in [0, 2**53) lies strictly inside (0, 1).
_TWO_NEG53 = 2.0 ** -53


def mix64(z: int) -> int:
    """SplitMix64 finalizer: a bijective avalanche mix of a 64-bit word."""
    z &= _MASK
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK
    return z ^ (z >> 31)


def substream_seed(seed: int, index: int) -> int:
    """Derive the seed of substream ``index`` from a master seed."""
    return mix64((seed ^ ((index * GOLDEN_GAMMA) & _MASK)) & _MASK)


class RandomState:
    """SplitMix64 stream over python ints masked to 64 bits.

    ``calls`` counts raw 64-bit draws; tests use it to assert work bounds.
    """

    __slots__ = ("state", "calls")

    def __init__(self, seed: int):
        self.state = seed & _MASK
        self.calls = 0

    def next_u64(self) -> int:
        self.state = (self.state + GOLDEN_GAMMA) & _MASK
        self.calls += 1
        return mix64(self.state)

    def u01(self) -> float:
        """Uniform double on the open interval (0, 1)."""
        return ((self.next_u64() >> 11) + 0.5) * _TWO_NEG53

    def below(self, bound: int) -> int:
        """Uniform integer in [0, bound), unbiased via rejection."""
        if bound <= 0:
            raise ValueError("bound must be positive")
        threshold = ((1 << 64) - bound) % bound  # == 2**64 mod bound
        while True:
            u = self.next_u64()
            if u >= threshold:
                return u % bound

    def spawn(self, index: int) -> "RandomState":
        """Stream seeded by ``substream_seed`` of the current state."""
        return RandomState(substream_seed(self.state, index))
