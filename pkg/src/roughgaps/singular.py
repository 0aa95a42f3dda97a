"""Singular series for integer tuples, their truncations, the Montgomery
average sums, and empirical pair correlations of rough numbers.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import mpmath
import numpy as np

from .constants import ConstantValue, PrecisionError, mertens_V_fraction, _EPS
from .sieve import RangeSpec, primes_upto, sieve_rough

MAX_TUPLE = 12
MAX_ZERO_TUPLE = 8


@dataclass(frozen=True)
class TupleSet:
    """Strictly increasing tuple of integers d_1 < ... < d_k."""

    elements: tuple[int, ...]

    def __post_init__(self) -> None:
        e = self.elements
        if any(e[i] >= e[i + 1] for i in range(len(e) - 1)):
            raise ValueError(f"elements must be strictly increasing, got {e}")
        if len(e) > MAX_TUPLE:
            raise ValueError(f"tuple size {len(e)} exceeds budget {MAX_TUPLE}")

    @property
    def k(self) -> int:
        return len(self.elements)

    @property
    def span(self) -> int:
        return self.elements[-1] - self.elements[0] if self.elements else 0


@dataclass(frozen=True)
class SingularValue:
    input: TupleSet
    value: ConstantValue
    truncation_z: int | None = None


def nu_p(D: TupleSet, p: int) -> int:
    """Number of distinct residue classes of D modulo p."""
    return len({d % p for d in D.elements})


def singular_truncated(D: TupleSet, z: int) -> SingularValue:
    """prod_{p<z} (1 - 1/p)^{-k} (1 - nu_p/p), exact rational."""
    if z < 3:
        raise ValueError(f"need z >= 3, got {z}")
    val = _truncated_fraction(D, z)
    return SingularValue(input=D, truncation_z=z,
                         value=ConstantValue(float(val), abs(float(val)) * _EPS))


def _truncated_fraction(D: TupleSet, z: int) -> Fraction:
    k = D.k
    val = Fraction(1)
    for p in primes_upto(z - 1):
        p = int(p)
        val *= Fraction(p - nu_p(D, p), p) * Fraction(p, p - 1) ** k
    return val


def singular(D: TupleSet, target_radius: float = 1e-9) -> SingularValue:
    """Full singular series prod_p (1 - 1/p)^{-k} (1 - nu_p/p).

    Factors differ from 1 only for p <= max(span, k); those are exact.
    The tail where nu_p = k is log-expanded over prime zeta values.
    """
    if target_radius < 1e-12:
        raise PrecisionError(f"cannot certify radius below 1e-12, asked {target_radius}")
    k = D.k
    if k == 0:
        return SingularValue(input=D, value=ConstantValue(1.0, 0.0))
    B = max(D.span, 2 * k, 30)
    finite = Fraction(1)
    for p in primes_upto(B):
        p = int(p)
        nu = nu_p(D, p)
        if nu == p:
            return SingularValue(input=D, value=ConstantValue(0.0, 0.0))
        finite *= Fraction(p - nu, p) * Fraction(p, p - 1) ** k
    # tail over p > B, where nu_p = k:
    # log factor = k*log(1-1/p)^{-1} + log(1-k/p) = -sum_{j>=2} (k^j - k)/j p^{-j}
    small = [int(p) for p in primes_upto(B)]
    with mpmath.workdps(30):
        total = mpmath.mpf(0)
        j = 2
        while True:
            pz_tail = mpmath.primezeta(j) - mpmath.fsum(mpmath.mpf(p) ** -j for p in small)
            total -= (mpmath.mpf(k) ** j - k) / j * pz_tail
            # remaining terms are below sum_{i>j} k^i * B^{1-i}/(i-1) (integral bound)
            tail = (k / B) ** (j + 1) * B * 2
            if tail < 1e-25:
                break
            j += 1
        tail_factor = float(mpmath.exp(total))
    value = float(finite) * tail_factor
    radius = abs(value) * (tail + 1e-24) + abs(value) * 8 * _EPS
    if radius > target_radius:
        raise PrecisionError(f"certified radius {radius} exceeds target {target_radius}")
    return SingularValue(input=D, value=ConstantValue(value, radius))


def singular_zero(D: TupleSet, target_radius: float = 1e-9) -> ConstantValue:
    """Signed inclusion-exclusion sum of singular series over subsets of D."""
    if D.k > MAX_ZERO_TUPLE:
        raise ValueError(f"tuple size {D.k} exceeds the 2^k subset budget {MAX_ZERO_TUPLE}")
    elems = D.elements
    total = ConstantValue(0.0, 0.0)
    for mask in range(1 << len(elems)):
        sub = tuple(e for i, e in enumerate(elems) if mask >> i & 1)
        sv = singular(TupleSet(sub), target_radius)
        sign = -1.0 if bin(mask).count("1") % 2 else 1.0
        total = total + sv.value * sign
    return total


def rho_2m(p: int, m: int) -> Fraction:
    """Sieve density for the pair (n, n+2m) at the prime p."""
    if m < 1:
        raise ValueError(f"need m >= 1, got {m}")
    if (2 * m) % p == 0:
        return Fraction(p - 1, p)
    return Fraction(p - 2, p)


def v_2m(z: int, m: int) -> Fraction:
    """V_{2m}(z) = prod_{p<z} rho_{2m}(p), exact; equals
    (1/2) V(z) prod_{p>2, p|m} (p-1)/(p-2) when the odd prime factors of m
    are all below z."""
    if z < 3 or m < 1:
        raise ValueError(f"need z >= 3 and m >= 1, got z={z}, m={m}")
    mm = m
    correction = Fraction(1)
    while mm % 2 == 0:
        mm //= 2
    q = 3
    while q * q <= mm:
        if mm % q == 0:
            if q >= z:
                raise ValueError(f"odd prime factor {q} of m={m} is not below z={z}")
            correction *= Fraction(q - 1, q - 2)
            while mm % q == 0:
                mm //= q
        q += 2
    if mm > 1:
        if mm >= z:
            raise ValueError(f"odd prime factor {mm} of m={m} is not below z={z}")
        correction *= Fraction(mm - 1, mm - 2)
    closed = Fraction(1, 2) * mertens_V_fraction(z) * correction
    direct = math.prod((rho_2m(int(p), m) for p in primes_upto(z - 1)), start=Fraction(1))
    if closed != direct:
        raise AssertionError(f"v_2m formulas disagree at z={z}, m={m}")
    return closed


def montgomery_summand_sieve(w: int) -> np.ndarray:
    """a(m) = prod_{p>2, p|m} (p-1)/(p-2) for m = 0..w as float64."""
    a = np.ones(w + 1)
    for p in primes_upto(w):
        p = int(p)
        if p == 2:
            continue
        a[p::p] *= (p - 1) / (p - 2)
    return a


def montgomery_summand_exact(m: int) -> Fraction:
    val = Fraction(1)
    mm = m
    while mm % 2 == 0:
        mm //= 2
    q = 3
    while q * q <= mm:
        if mm % q == 0:
            val *= Fraction(q - 1, q - 2)
            while mm % q == 0:
                mm //= q
        q += 2
    if mm > 1:
        val *= Fraction(mm - 1, mm - 2)
    return val


def montgomery_sums(w: int, S: ConstantValue | None = None, exact: bool = False) -> dict:
    """sum_{m<=w} a(m) and its m-weighted version, with the first-order
    predictions 2w/S and w^2/S."""
    if w < 1:
        raise ValueError(f"need w >= 1, got {w}")
    if S is None:
        from .constants import twin_prime_constant
        S = twin_prime_constant(1e-9)
    out: dict = {"w": w}
    if exact:
        if w > 10 ** 5:
            raise ValueError("exact mode is budgeted to w <= 1e5")
        terms = [montgomery_summand_exact(m) for m in range(1, w + 1)]
        out["plain_exact"] = sum(terms)
        out["weighted_exact"] = sum(m * t for m, t in zip(range(1, w + 1), terms))
        out["plain"] = float(out["plain_exact"])
        out["weighted"] = float(out["weighted_exact"])
    else:
        a = montgomery_summand_sieve(w)
        a[0] = 0.0
        out["plain"] = float(np.sum(a))
        out["weighted"] = float(np.sum(a * np.arange(w + 1)))
    out["predicted_plain"] = 2 * w / S.value
    out["predicted_weighted"] = w ** 2 / S.value
    return out


def pair_correlation(X: int, z: int, h_max: int) -> list[dict]:
    """Empirical S_h = (1/X) sum_{X<=n<=2X} 1_rough(n) 1_rough(n+h) against
    the sieve prediction V_{2m}(z) for h = 2m; odd h are exactly zero."""
    if z < 3:
        raise ValueError(f"need z >= 3 so rough numbers are odd, got {z}")
    seg = sieve_rough(RangeSpec(X, 2 * X + h_max + 1), z)
    flags = seg.flags
    n_count = X + 1  # n runs over the closed range [X, 2X]
    rows = []
    for h in range(1, h_max + 1):
        hits = int(np.count_nonzero(flags[:n_count] & flags[h : n_count + h]))
        s_h = hits / X
        if h % 2:
            row = {"h": h, "S_empirical": s_h, "V_predicted": 0.0, "ratio": None}
        else:
            pred = float(v_2m(z, h // 2))
            row = {"h": h, "S_empirical": s_h, "V_predicted": pred,
                   "ratio": s_h / pred if pred else None}
        rows.append(row)
    return rows
