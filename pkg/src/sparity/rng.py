"""Deterministic seeded random stream used by every randomized routine.

The generator is SplitMix64: a 64-bit counter advanced by the constant
0x9E3779B97F4A7C15 and finalized with two xor-shift-multiply rounds.  It
is implemented directly on Python integers so that a given seed yields
the same draw sequence on every platform and Python version; library
RNGs make no such cross-version promise for their derived distributions.

Uniform draws below a bound use rejection sampling on full 64-bit words,
so there is no modulo bias.
"""

from __future__ import annotations

_MASK64 = (1 << 64) - 1
_GAMMA = 0x9E3779B97F4A7C15
_MIX1 = 0xBF58476D1CE4E5B9
_MIX2 = 0x94D049BB133111EB


class SeededStream:
    """Reproducible stream of uniform integers."""

    __slots__ = ("_state",)

    def __init__(self, seed: int):
        self._state = seed & _MASK64

    def next_u64(self) -> int:
        self._state = (self._state + _GAMMA) & _MASK64
        z = self._state
        z = ((z ^ (z >> 30)) * _MIX1) & _MASK64
        z = ((z ^ (z >> 27)) * _MIX2) & _MASK64
        return z ^ (z >> 31)

    def below(self, n: int) -> int:
        """Uniform integer in [0, n)."""
        if n <= 0:
            raise ValueError("bound must be positive")
        if n == 1:
            return 0
        threshold = ((1 << 64) // n) * n
        while True:
            v = self.next_u64()
            if v < threshold:
                return v % n

    def sample_distinct(self, upper: int, count: int) -> list[int]:
        """`count` distinct integers from [0, upper), by partial Fisher-Yates.

        Uses a sparse swap table so `upper` may be large.
        """
        if count > upper:
            raise ValueError("cannot sample more distinct values than the range holds")
        swapped: dict[int, int] = {}
        out = []
        for i in range(count):
            j = i + self.below(upper - i)
            vj = swapped.get(j, j)
            swapped[j] = swapped.get(i, i)
            out.append(vj)
        return out

    def shuffle(self, items: list) -> None:
        """In-place Fisher-Yates shuffle."""
        for i in range(len(items) - 1, 0, -1):
            j = self.below(i + 1)
            items[i], items[j] = items[j], items[i]
