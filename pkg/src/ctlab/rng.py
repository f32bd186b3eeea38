"""Deterministic, bit-portable pseudo-randomness.

Everything in the package that consumes randomness (random DNF construction,
Monte-Carlo sampling streams) goes through the generators defined here, so
that identical seeds give bit-identical results on every platform and for
every worker count. Python integer arithmetic only; no dependence on the
stdlib Mersenne twister or numpy bit generators, whose streams are not part
of any cross-version contract.

Generator: xorshift64* with the update rule (all arithmetic mod 2^64)

    x ^= x >> 12
    x ^= x << 25
    x ^= x >> 27
    output = x * 0x2545F4914F6CDD1D

States are derived from user seeds through the splitmix64 finalizer `mix64`,
which is bijective on 64-bit words, so distinct (seed, index) pairs map to
distinct states.
"""

from __future__ import annotations

MASK64 = (1 << 64) - 1
GOLDEN = 0x9E3779B97F4A7C15  # 2^64 / golden ratio, odd


def mix64(z: int) -> int:
    """splitmix64 finalizer: bijective avalanche mix of a 64-bit word."""
    z &= MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return z ^ (z >> 31)


class XorShift64Star:
    """xorshift64* stream. The internal state must stay nonzero."""

    __slots__ = ("state",)

    def __init__(self, seed: int):
        s = mix64(seed)
        self.state = s if s else GOLDEN

    def next64(self) -> int:
        x = self.state
        x ^= x >> 12
        x ^= (x << 25) & MASK64
        x ^= x >> 27
        self.state = x
        return (x * 0x2545F4914F6CDD1D) & MASK64

    def below(self, bound: int) -> int:
        """Uniform draw from range(bound), exact via rejection."""
        if bound <= 0:
            raise ValueError("bound must be positive")
        limit = (1 << 64) - ((1 << 64) % bound)
        while True:
            u = self.next64()
            if u < limit:
                return u % bound


def sample_stream(seed: int, index: int) -> XorShift64Star:
    """Independent stream for sample `index` under root `seed`.

    Derivation: state = mix64(seed XOR (index + 1) * GOLDEN). Worker k can
    therefore generate sample index i without generating samples 0..i-1,
    which is what makes estimates independent of the worker count.
    """
    return XorShift64Star((seed ^ ((index + 1) * GOLDEN)) & MASK64)


def bernoulli_threshold(p) -> int:
    """Integer t with t/2^64 = p rounded down; draw u < t has P = t/2^64.

    The quantization bias is below 2^-64 and is documented as part of the
    sampling contract.
    """
    return (p.numerator << 64) // p.denominator
