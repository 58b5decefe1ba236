"""Seeded xorshift64* generator.

    x ^= x >> 12; x ^= x << 25; x ^= x >> 27   (all mod 2^64)
    output = x * 0x2545F4914F6CDD1D mod 2^64

A zero seed is replaced by SEED_FALLBACK since the all-zero state is fixed.
Wider values are built from consecutive outputs, most significant word first.
"""

MASK64 = (1 << 64) - 1
MULTIPLIER = 0x2545F4914F6CDD1D
SEED_FALLBACK = 0x9E3779B97F4A7C15


class XorShift64Star:
    def __init__(self, seed: int):
        self.state = (seed & MASK64) or SEED_FALLBACK

    def next_u64(self) -> int:
        x = self.state
        x ^= x >> 12
        x ^= (x << 25) & MASK64
        x ^= x >> 27
        self.state = x
        return (x * MULTIPLIER) & MASK64

    def randbits(self, bits: int) -> int:
        if bits <= 0:
            return 0
        value = 0
        for _ in range((bits + 63) // 64):
            value = (value << 64) | self.next_u64()
        return value >> (-bits % 64)

    def randbelow(self, n: int) -> int:
        """Uniform in [0, n) by rejection."""
        if n <= 0:
            raise ValueError(f"empty range below {n}")
        bits = n.bit_length()
        while True:
            value = self.randbits(bits)
            if value < n:
                return value

    def randrange(self, start: int, stop: int) -> int:
        return start + self.randbelow(stop - start)

    def fork(self, index: int) -> "XorShift64Star":
        """Independent stream for worker index, derived from the current state."""
        return XorShift64Star(self.state ^ ((index + 1) * SEED_FALLBACK & MASK64))
