"""Seeded, named random streams with a fixed cross-platform generator.

Every stochastic input of a simulation draws from its own named stream, so
changing one input's policy or distribution never perturbs the draws of the
others (common random numbers across compared scenarios).

Generator: xoshiro256++ (Blackman & Vigna), state seeded from the 64-bit
master seed XORed with the first 8 bytes (little-endian) of SHA-256 of the
stream name, expanded through splitmix64.  Uniform doubles come from the top
53 bits of each 64-bit output.  The whole pipeline is plain integer
arithmetic, so identical (name, seed) pairs reproduce identical sequences on
any platform.
"""

from __future__ import annotations

import hashlib
import math
from dataclasses import dataclass

_MASK64 = (1 << 64) - 1


def _splitmix64(state: int) -> tuple[int, int]:
    """One splitmix64 step: returns (output, next_state)."""
    state = (state + 0x9E3779B97F4A7C15) & _MASK64
    z = state
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return (z ^ (z >> 31)) & _MASK64, state


def _rotl(x: int, k: int) -> int:
    return ((x << k) | (x >> (64 - k))) & _MASK64


def stream_seed(master_seed: int, name: str) -> int:
    """Derive a stream's 64-bit seed from the master seed and its name."""
    digest = hashlib.sha256(name.encode("utf-8")).digest()
    return (master_seed ^ int.from_bytes(digest[:8], "little")) & _MASK64


class RngStream:
    """xoshiro256++ stream addressed by (name, master seed)."""

    __slots__ = ("name", "seed", "_s0", "_s1", "_s2", "_s3")

    def __init__(self, name: str, master_seed: int) -> None:
        self.name = name
        self.seed = master_seed & _MASK64
        sm = stream_seed(self.seed, name)
        self._s0, sm = _splitmix64(sm)
        self._s1, sm = _splitmix64(sm)
        self._s2, sm = _splitmix64(sm)
        self._s3, sm = _splitmix64(sm)
        if not (self._s0 | self._s1 | self._s2 | self._s3):
            self._s0 = 1  # all-zero state is invalid for xoshiro

    def next_u64(self) -> int:
        s0, s1, s2, s3 = self._s0, self._s1, self._s2, self._s3
        result = (_rotl((s0 + s3) & _MASK64, 23) + s0) & _MASK64
        t = (s1 << 17) & _MASK64
        s2 ^= s0
        s3 ^= s1
        s1 ^= s2
        s0 ^= s3
        s2 ^= t
        s3 = _rotl(s3, 45)
        self._s0, self._s1, self._s2, self._s3 = s0, s1, s2, s3
        return result

    def uniform01(self) -> float:
        """Uniform double in [0, 1) from the top 53 bits."""
        return (self.next_u64() >> 11) * (1.0 / (1 << 53))


class DistributionError(ValueError):
    """Raised for invalid distribution parameters."""


_FAMILIES = ("constant", "uniform", "exponential", "triangular", "empirical")


@dataclass(frozen=True)
class Distribution:
    """A validated distribution spec; sampled against an RngStream.

    Supported families:
      constant(c), uniform(a, b), exponential(mean),
      triangular(low, mode, high), empirical([(value, weight), ...]).

    Every sample consumes exactly one generator step (constant included), so
    swapping one family for another keeps all other draws aligned.
    """

    family: str
    params: tuple

    def __post_init__(self) -> None:
        if self.family not in _FAMILIES:
            raise DistributionError(f"unknown distribution family {self.family!r}")
        p = self.params
        if self.family == "constant":
            if len(p) != 1 or not math.isfinite(p[0]):
                raise DistributionError("constant requires one finite value")
        elif self.family == "uniform":
            if len(p) != 2 or p[0] > p[1]:
                raise DistributionError(f"uniform requires a <= b, got {p}")
        elif self.family == "exponential":
            if len(p) != 1 or p[0] <= 0:
                raise DistributionError(f"exponential requires mean > 0, got {p}")
        elif self.family == "triangular":
            if len(p) != 3 or not (p[0] <= p[1] <= p[2]) or p[0] >= p[2]:
                raise DistributionError(
                    f"triangular requires low <= mode <= high with low < high, got {p}"
                )
        elif self.family == "empirical":
            if len(p) == 0:
                raise DistributionError("empirical requires at least one entry")
            for entry in p:
                if len(entry) != 2 or entry[1] <= 0:
                    raise DistributionError(
                        f"empirical entries are (value, weight > 0), got {entry!r}"
                    )

    @classmethod
    def constant(cls, value: float) -> "Distribution":
        return cls("constant", (float(value),))

    @classmethod
    def uniform(cls, a: float, b: float) -> "Distribution":
        return cls("uniform", (float(a), float(b)))

    @classmethod
    def exponential(cls, mean: float) -> "Distribution":
        return cls("exponential", (float(mean),))

    @classmethod
    def triangular(cls, low: float, mode: float, high: float) -> "Distribution":
        return cls("triangular", (float(low), float(mode), float(high)))

    @classmethod
    def empirical(cls, table: list[tuple[float, float]]) -> "Distribution":
        return cls("empirical", tuple((float(v), float(w)) for v, w in table))

    @property
    def mean(self) -> float:
        p = self.params
        if self.family == "constant":
            return p[0]
        if self.family == "uniform":
            return (p[0] + p[1]) / 2.0
        if self.family == "exponential":
            return p[0]
        if self.family == "triangular":
            return (p[0] + p[1] + p[2]) / 3.0
        total = sum(w for _, w in p)
        return sum(v * w for v, w in p) / total

    @property
    def max_value(self) -> float:
        p = self.params
        if self.family == "constant":
            return p[0]
        if self.family == "uniform":
            return p[1]
        if self.family == "exponential":
            return math.inf
        if self.family == "triangular":
            return p[2]
        return max(v for v, _ in p)

    def sample(self, stream: RngStream) -> float:
        u = stream.uniform01()
        p = self.params
        if self.family == "constant":
            return p[0]
        if self.family == "uniform":
            return p[0] + (p[1] - p[0]) * u
        if self.family == "exponential":
            return -p[0] * math.log(1.0 - u)
        if self.family == "triangular":
            low, mode, high = p
            span = high - low
            cut = (mode - low) / span
            if u < cut:
                return low + math.sqrt(u * span * (mode - low))
            return high - math.sqrt((1.0 - u) * span * (high - mode))
        # empirical: walk the normalized cumulative weights
        total = sum(w for _, w in p)
        threshold = u * total
        cumulative = 0.0
        for value, weight in p:
            cumulative += weight
            if threshold < cumulative:
                return value
        return p[-1][0]


def sample(stream: RngStream, dist: Distribution) -> float:
    """Draw one value; module-level alias for Distribution.sample."""
    return dist.sample(stream)
