"""Segmented prime and least-prime-factor sieving primitives.

Responsibility: prime enumeration, roughness flags, small-lpf arrays and
primorials.  No gap logic, no analytic constants.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

# Largest n any sieve in this package will touch.
GLOBAL_BOUND = 2 ** 48

# L2-cache-sized default working set.
DEFAULT_SEGMENT = 1 << 22

# primorial() rejects h whose primorial would not fit 128 bits.
_PRIMORIAL_BUDGET = 1 << 127


class SieveBudgetError(ValueError):
    """Requested range exceeds the sieve memory/size budget."""


class PrimorialOverflowError(OverflowError):
    """Primorial would exceed the exact 128-bit integer budget."""


@dataclass(frozen=True)
class RangeSpec:
    """Half-open integer range [lo, hi)."""

    lo: int
    hi: int

    def __post_init__(self) -> None:
        if self.lo < 0:
            raise ValueError(f"lo must be >= 0, got {self.lo}")
        if self.hi <= self.lo:
            raise ValueError(f"need lo < hi, got [{self.lo}, {self.hi})")
        if self.hi > GLOBAL_BOUND:
            raise SieveBudgetError(f"hi={self.hi} exceeds global bound {GLOBAL_BOUND}")

    def __len__(self) -> int:
        return self.hi - self.lo


@dataclass(frozen=True)
class RoughSegment:
    """A sieved window with per-integer "no prime factor < z" flags.

    flags[i] is True iff p(base + i) >= z, with the convention p(1) = 1
    (so n = 1 is never flagged for z >= 2).
    """

    base: int
    z: int
    flags: np.ndarray

    @property
    def length(self) -> int:
        return len(self.flags)

    def popcount(self) -> int:
        return int(np.count_nonzero(self.flags))


@dataclass(frozen=True)
class Primorial:
    """Exact product of all primes strictly below h."""

    h: int
    value: int


@lru_cache(maxsize=64)
def primes_upto(n: int) -> np.ndarray:
    """All primes <= n by a plain sieve of Eratosthenes (int64 array)."""
    if n < 2:
        return np.empty(0, dtype=np.int64)
    flags = np.ones(n + 1, dtype=bool)
    flags[0:2] = False
    for p in range(2, math.isqrt(n) + 1):
        if flags[p]:
            flags[p * p :: p] = False
    return np.flatnonzero(flags).astype(np.int64)


def prime_mask(lo: int, hi: int, base_primes: np.ndarray | None = None) -> np.ndarray:
    """Boolean primality mask for the half-open window [lo, hi)."""
    if base_primes is None:
        base_primes = primes_upto(math.isqrt(max(hi - 1, 0)))
    n = hi - lo
    mask = np.ones(n, dtype=bool)
    for i in range(min(2 - lo, n)):
        if lo + i < 2:
            mask[i] = False
    for p in base_primes:
        p = int(p)
        if p * p >= hi:
            break
        start = max(p * p, ((lo + p - 1) // p) * p)
        mask[start - lo :: p] = False
    return mask


def primes_in_range(
    r: RangeSpec,
    segment_size: int = DEFAULT_SEGMENT,
    auto_chunk: bool = True,
) -> np.ndarray:
    """Ascending array of the primes in [r.lo, r.hi)."""
    if len(r) > segment_size and not auto_chunk:
        raise SieveBudgetError(
            f"range of width {len(r)} exceeds segment budget {segment_size} "
            "and auto-chunking is disabled"
        )
    base = primes_upto(math.isqrt(r.hi - 1))
    parts = []
    for lo in range(r.lo, r.hi, segment_size):
        hi = min(lo + segment_size, r.hi)
        mask = prime_mask(lo, hi, base)
        parts.append(np.flatnonzero(mask).astype(np.int64) + lo)
    return np.concatenate(parts) if parts else np.empty(0, dtype=np.int64)


def least_prime_factor(n: int) -> int:
    """Smallest prime dividing n, with p(1) = 1."""
    if n < 1:
        raise ValueError(f"need n >= 1, got {n}")
    if n == 1:
        return 1
    for p in (2, 3, 5):
        if n % p == 0:
            return p
    # 2/3-coprime wheel
    f = 7
    step = 4
    while f * f <= n:
        if n % f == 0:
            return f
        f += step
        step = 6 - step
    return n


def sieve_rough(r: RangeSpec, z: int, base_primes: np.ndarray | None = None) -> RoughSegment:
    """Flag the integers of [r.lo, r.hi) whose least prime factor is >= z."""
    if z < 2:
        raise ValueError(f"need z >= 2, got {z}")
    if base_primes is None:
        base_primes = primes_upto(z - 1)
    flags = np.ones(len(r), dtype=bool)
    for p in base_primes:
        p = int(p)
        if p >= z:
            break
        start = ((r.lo + p - 1) // p) * p
        flags[start - r.lo :: p] = False
    if r.lo <= 1 < r.hi:
        flags[1 - r.lo] = False
    if r.lo == 0:
        flags[0] = False
    return RoughSegment(base=r.lo, z=z, flags=flags)


def rough_count(r: RangeSpec, z: int, segment_size: int = DEFAULT_SEGMENT) -> int:
    """Number of integers in [r.lo, r.hi) with least prime factor >= z."""
    base = primes_upto(z - 1)
    total = 0
    for lo in range(r.lo, r.hi, segment_size):
        hi = min(lo + segment_size, r.hi)
        total += sieve_rough(RangeSpec(lo, hi), z, base).popcount()
    return total


def lpf_small_array(lo: int, hi: int, bound: int) -> np.ndarray:
    """uint16 array a where a[i] = least prime factor of lo+i among primes < bound,
    or 0 if lo+i has no prime factor below bound.

    Used for witness certification inside prime gaps; not a full lpf sieve.
    """
    if bound > np.iinfo(np.uint16).max:
        raise ValueError(f"bound {bound} does not fit uint16")
    arr = np.zeros(hi - lo, dtype=np.uint16)
    # Descending so the smallest prime wins the final write.
    for p in primes_upto(bound - 1)[::-1]:
        p = int(p)
        start = ((lo + p - 1) // p) * p
        arr[start - lo :: p] = p
    return arr


def primorial(h: int) -> Primorial:
    """Exact primorial P(h) = product of all primes strictly below h."""
    if h < 2:
        raise ValueError(f"need h >= 2, got {h}")
    value = 1
    for p in primes_upto(h - 1):
        value *= int(p)
        if value > _PRIMORIAL_BUDGET:
            raise PrimorialOverflowError(f"primorial of h={h} exceeds the 128-bit budget")
    return Primorial(h=h, value=value)
