"""Self-contained deterministic PRNG (xorshift64*).

Reports must be byte-identical across platforms and Python versions, so the
sampling schedule cannot depend on the stdlib Mersenne Twister internals.
"""

from __future__ import annotations

MASK = (1 << 64) - 1


def _splitmix64(x: int) -> int:
    x = (x + 0x9E3779B97F4A7C15) & MASK
    z = x
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK
    return (z ^ (z >> 31)) & MASK


class XorShift:
    __slots__ = ("state",)

    def __init__(self, seed: int):
        self.state = _splitmix64(seed & MASK) or 0x2545F4914F6CDD1D

    def next_u64(self) -> int:
        x = self.state
        x ^= (x >> 12)
        x ^= (x << 25) & MASK
        x ^= (x >> 27)
        self.state = x
        return (x * 0x2545F4914F6CDD1D) & MASK

    def randint(self, lo: int, hi: int) -> int:
        """Uniform-enough integer in [lo, hi]; exact distribution is not a
        contract, determinism is."""
        span = hi - lo + 1
        return lo + self.next_u64() % span
