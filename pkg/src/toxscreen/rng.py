"""Deterministic PRNG used for every shuffle in the library.

The generator is xorshift64* so that splits, folds and stochastic solver
runs are reproducible from a single integer seed across platforms and
implementations.  Update equations (64-bit wrapping arithmetic):

    x ^= x >> 12
    x ^= x << 25
    x ^= x >> 27
    output = x * 0x2545F4914F6CDD1D

The state must never be zero; seed 0 is replaced by a fixed constant.
"""

from __future__ import annotations

_MASK = (1 << 64) - 1
_MULT = 0x2545F4914F6CDD1D
_ZERO_SEED_STATE = 0x9E3779B97F4A7C15


class XorShift64Star:
    """64-bit xorshift* generator with the update equations above."""

    def __init__(self, seed: int):
        if seed < 0:
            raise ValueError(f"seed must be a non-negative integer, got {seed}")
        state = seed & _MASK
        self._state = state if state != 0 else _ZERO_SEED_STATE

    def next_u64(self) -> int:
        x = self._state
        x ^= x >> 12
        x ^= (x << 25) & _MASK
        x ^= x >> 27
        self._state = x
        return (x * _MULT) & _MASK

    def below(self, n: int) -> int:
        """Uniform-ish integer in [0, n) via modulo reduction.

        The modulo bias is negligible for n << 2**64 and keeps the
        algorithm trivially portable.
        """
        if n <= 0:
            raise ValueError(f"n must be positive, got {n}")
        return self.next_u64() % n


def shuffled_indices(n: int, seed: int) -> list[int]:
    """Seeded Fisher-Yates permutation of range(n).

    Iterates i from n-1 down to 1, draws j = next_u64() % (i+1) and swaps
    positions i and j.
    """
    rng = XorShift64Star(seed)
    perm = list(range(n))
    for i in range(n - 1, 0, -1):
        j = rng.below(i + 1)
        perm[i], perm[j] = perm[j], perm[i]
    return perm
