"""Portable deterministic 64-bit pseudo-randomness (SplitMix64).

Everything that needs reproducible randomness — grid generation, the
inadmissible-heuristic noise, random work routing — goes through the
SplitMix64 stream or its stateless finalizer so that any implementation
of the same constants produces bit-identical output.
"""

from __future__ import annotations

import numpy as np

MASK64 = (1 << 64) - 1

# SplitMix64 constants (Steele, Lea & Flood; public domain reference code).
GAMMA = 0x9E3779B97F4A7C15
_MIX1 = 0xBF58476D1CE4E5B9
_MIX2 = 0x94D049BB133111EB


def mix64(z: int) -> int:
    """SplitMix64 avalanche finalizer over a 64-bit value."""
    z &= MASK64
    z = ((z ^ (z >> 30)) * _MIX1) & MASK64
    z = ((z ^ (z >> 27)) * _MIX2) & MASK64
    return z ^ (z >> 31)


def splitmix_at(seed: int, index: int) -> int:
    """The index-th output (0-based) of the SplitMix64 stream seeded with `seed`."""
    return mix64((seed + (index + 1) * GAMMA) & MASK64)


def u64_to_unit(u: int) -> float:
    """Map a 64-bit value to a float in [0, 1) using the top 53 bits."""
    return (u >> 11) * 2.0**-53


def splitmix_block(seed: int, first: int, count: int) -> np.ndarray:
    """Vectorized outputs [first, first+count) of the stream `seed`.

    Element-identical to splitmix_at(seed, k); uint64 arithmetic wraps
    mod 2**64 exactly as the scalar path does.
    """
    idx = np.arange(first + 1, first + count + 1, dtype=np.uint64)
    with np.errstate(over="ignore"):
        z = np.uint64(seed & MASK64) + idx * np.uint64(GAMMA)
        z = (z ^ (z >> np.uint64(30))) * np.uint64(_MIX1)
        z = (z ^ (z >> np.uint64(27))) * np.uint64(_MIX2)
        return z ^ (z >> np.uint64(31))


class SplitMix64:
    """Stateful SplitMix64 generator; output k equals splitmix_at(seed, k)."""

    __slots__ = ("_state",)

    def __init__(self, seed: int):
        self._state = seed & MASK64

    def next_u64(self) -> int:
        self._state = (self._state + GAMMA) & MASK64
        return mix64(self._state)

    def next_unit(self) -> float:
        """Uniform float in [0, 1)."""
        return u64_to_unit(self.next_u64())

    def next_below(self, bound: int) -> int:
        """Uniform integer in [0, bound) via modulo reduction.

        The modulo bias is below 2**-32 for any bound that fits in 32 bits,
        which covers every use here; plain reduction keeps the mapping
        trivially portable.
        """
        if bound <= 0:
            raise ValueError("bound must be positive")
        return self.next_u64() % bound
