"""Deterministic 64-bit PRNG used everywhere randomness is needed.

The algorithm is splitmix64 (Steele, Lea & Flood's mix function), chosen
because its whole state is a single u64 that can travel in scene and trace
headers, and because it is trivially reproducible in any language. Traces
and generated scenes carry the identifier ``"splitmix64"`` so a replayer
knows what to instantiate.
"""

from __future__ import annotations

MASK64 = (1 << 64) - 1

PRNG_ID = "splitmix64"


class SplitMix64:
    """splitmix64 stream; state advances by the golden-gamma constant."""

    __slots__ = ("state",)

    def __init__(self, seed: int):
        self.state = seed & MASK64

    def next_u64(self) -> int:
        self.state = (self.state + 0x9E3779B97F4A7C15) & MASK64
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
        return z ^ (z >> 31)

    def randrange(self, n: int) -> int:
        """Uniform integer in [0, n) via rejection sampling (unbiased)."""
        if n <= 0:
            raise ValueError("randrange bound must be positive")
        bound = (1 << 64) - ((1 << 64) % n)
        while True:
            draw = self.next_u64()
            if draw < bound:
                return draw % n

    def randint(self, lo: int, hi: int) -> int:
        """Uniform integer in the inclusive range [lo, hi]."""
        if hi < lo:
            raise ValueError(f"empty range [{lo}, {hi}]")
        return lo + self.randrange(hi - lo + 1)

    def choice(self, seq):
        return seq[self.randrange(len(seq))]

    def sample_distinct(self, seq, k: int) -> list:
        """k distinct elements drawn without replacement, order of draw."""
        pool = list(seq)
        if k > len(pool):
            raise ValueError(f"cannot sample {k} from {len(pool)} items")
        picked = []
        for _ in range(k):
            idx = self.randrange(len(pool))
            picked.append(pool.pop(idx))
        return picked

    def split(self) -> "SplitMix64":
        """Fork an independent child stream seeded from this one."""
        return SplitMix64(self.next_u64())
