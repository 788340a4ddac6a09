"""Small seedable generator with a fully specified recurrence.

SplitMix64: the state advances by 0x9E3779B97F4A7C15 modulo 2**64 and each
output is the state passed through two xor-shift-multiply rounds with
multipliers 0xBF58476D1CE4E5B9 and 0x94D049BB133111EB (shifts 30, 27, 31).
Uniform floats take the top 53 bits.  Any implementation using these
constants reproduces the same streams for the same seed.
"""

from __future__ import annotations

from typing import Sequence, TypeVar

_MASK = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15

T = TypeVar("T")


class SplitMix64:
    def __init__(self, seed: int) -> None:
        self.state = seed & _MASK

    def next_u64(self) -> int:
        self.state = (self.state + _GOLDEN) & _MASK
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK
        return z ^ (z >> 31)

    def random(self) -> float:
        """Uniform float in [0, 1)."""
        return (self.next_u64() >> 11) * (1.0 / (1 << 53))

    def below(self, n: int) -> int:
        """Uniform integer in [0, n)."""
        if n <= 0:
            raise ValueError("n must be positive")
        return int(self.random() * n)

    def choice(self, items: Sequence[T]) -> T:
        return items[self.below(len(items))]

    def weighted_index(self, weights: Sequence[float]) -> int:
        total = 0.0
        for w in weights:
            total += w
        u = self.random() * total
        acc = 0.0
        last = 0
        for i, w in enumerate(weights):
            if w <= 0.0:
                continue
            acc += w
            last = i
            if u < acc:
                return i
        return last
