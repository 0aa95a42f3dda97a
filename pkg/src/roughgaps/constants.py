"""Analytic constants with guaranteed error radii.

Twin prime constant, e^{-gamma}, the Mertens-type product V(z), the
Buchstab function, and the expected window counts R and R'.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import mpmath
import numpy as np

from .sieve import RangeSpec, primes_upto, rough_count

_EPS = 2.0 ** -52


class PrecisionError(ArithmeticError):
    """Requested error radius cannot be certified by this method."""


@dataclass(frozen=True)
class ConstantValue:
    """A numeric value with a guaranteed enclosure [value - radius, value + radius]."""

    value: float
    radius: float

    def __post_init__(self) -> None:
        if not math.isfinite(self.radius) or self.radius < 0:
            raise ValueError(f"radius must be finite and >= 0, got {self.radius}")

    def contains(self, x: float) -> bool:
        return abs(self.value - x) <= self.radius

    def overlaps(self, other: "ConstantValue") -> bool:
        return abs(self.value - other.value) <= self.radius + other.radius

    def __add__(self, other):
        o = _as_cv(other)
        v = self.value + o.value
        return ConstantValue(v, self.radius + o.radius + abs(v) * _EPS)

    def __sub__(self, other):
        o = _as_cv(other)
        v = self.value - o.value
        return ConstantValue(v, self.radius + o.radius + abs(v) * _EPS)

    def __mul__(self, other):
        o = _as_cv(other)
        v = self.value * o.value
        r = (abs(self.value) * o.radius + abs(o.value) * self.radius
             + self.radius * o.radius + abs(v) * _EPS)
        return ConstantValue(v, r)

    __radd__ = __add__
    __rmul__ = __mul__

    def __truediv__(self, other):
        o = _as_cv(other)
        if abs(o.value) <= o.radius:
            raise ZeroDivisionError("divisor interval contains zero")
        v = self.value / o.value
        denom = abs(o.value) - o.radius
        r = (self.radius + abs(v) * o.radius) / denom + abs(v) * _EPS
        return ConstantValue(v, r)


def _as_cv(x) -> ConstantValue:
    if isinstance(x, ConstantValue):
        return x
    return ConstantValue(float(x), 0.0)


def _prod_tree(vals: list[int]) -> int:
    if not vals:
        return 1
    while len(vals) > 1:
        vals = [vals[i] * vals[i + 1] for i in range(0, len(vals) - 1, 2)] + (
            [vals[-1]] if len(vals) % 2 else []
        )
    return vals[0]


def _ratio_to_float(num: int, den: int) -> float:
    """num / den for arbitrarily large positive integers, to float precision."""
    shift = num.bit_length() - den.bit_length() - 64
    if shift > 0:
        q = num // (den << shift)
    else:
        q = (num << -shift) // den
    return math.ldexp(q, shift)


def twin_prime_constant(target_radius: float = 1e-12) -> ConstantValue:
    """The constant 2 * prod_{p>2} (1 - 1/(p-1)^2), via prime zeta values.

    log of the product is expanded as -sum_{k>=2} (2^k - 2)/k * (P(k) - 2^{-k})
    with P the prime zeta function, which converges geometrically.
    """
    if target_radius < 1e-12:
        raise PrecisionError(f"cannot certify radius below 1e-12, asked {target_radius}")
    with mpmath.workdps(40):
        total = mpmath.mpf(0)
        k = 2
        while True:
            term = (mpmath.mpf(2 ** k - 2) / k) * (mpmath.primezeta(k) - mpmath.mpf(2) ** -k)
            total += term
            # remaining terms are below sum_{j>k} (2^j/j) * 2 * 3^{-j}
            tail = 6.0 * (2.0 / 3.0) ** (k + 1)
            if tail < 1e-30 and k > 10:
                break
            k += 1
        value_mp = 2 * mpmath.exp(-total)
        value = float(value_mp)
    # mpmath evaluation error ~1e-35 at 40 dps; dominate with tail + float rounding
    radius = value * (tail + 1e-30) + abs(value) * _EPS
    if radius > target_radius:
        raise PrecisionError(f"certified radius {radius} exceeds target {target_radius}")
    return ConstantValue(value, radius)


def twin_prime_constant_oracle(prime_bound: int = 10 ** 7) -> ConstantValue:
    """Slow direct-product evaluation over primes below prime_bound, with tail bound."""
    p = primes_upto(prime_bound)
    p = p[p > 2].astype(np.float64)
    log_prod = float(np.sum(np.log1p(-1.0 / (p - 1.0) ** 2)))
    value = 2.0 * math.exp(log_prod)
    # tail: sum_{p > N} 1/(p-1)^2 < sum_{n >= N} 1/n^2 < 1/(N-1)
    tail = 1.0 / (prime_bound - 1)
    rounding = len(p) * _EPS * 2
    return ConstantValue(value, value * (tail + rounding))


@lru_cache(maxsize=1)
def exp_neg_gamma() -> ConstantValue:
    """e^{-gamma} with radius 1e-14."""
    with mpmath.workdps(30):
        value = float(mpmath.exp(-mpmath.euler))
    return ConstantValue(value, 1e-14)


def euler_gamma_second_method(n: int = 10 ** 6) -> ConstantValue:
    """Euler-Maclaurin estimate of gamma, independent of the mpmath constant.

    gamma = H_n - log n - 1/(2n) + 1/(12n^2) - 1/(120n^4) + theta/(252 n^6).
    """
    h = float(np.sum(1.0 / np.arange(1, n + 1, dtype=np.float64)[::-1]))
    value = h - math.log(n) - 1 / (2 * n) + 1 / (12 * n ** 2) - 1 / (120 * n ** 4)
    radius = 1 / (252 * n ** 6) + n * _EPS * 4
    return ConstantValue(value, radius)


def mertens_V_fraction(z: int) -> Fraction:
    """Exact rational V(z) = prod_{2<p<z} (1 - 2/p)."""
    if z < 3:
        raise ValueError(f"need z >= 3, got {z}")
    ps = [int(p) for p in primes_upto(z - 1) if p > 2]
    return Fraction(_prod_tree([p - 2 for p in ps]), _prod_tree(list(ps)))


def mertens_V(z: int) -> ConstantValue:
    """V(z) evaluated exactly, with radius from the final rounding only."""
    if z < 3:
        raise ValueError(f"need z >= 3, got {z}")
    ps = [int(p) for p in primes_upto(z - 1) if p > 2]
    num = _prod_tree([p - 2 for p in ps])
    den = _prod_tree(ps)
    value = _ratio_to_float(num, den)
    return ConstantValue(value, abs(value) * 4 * _EPS)


def coprime_density(z: int) -> ConstantValue:
    """prod_{p<z} (1 - 1/p), exact product then a single rounding."""
    if z < 3:
        raise ValueError(f"need z >= 3, got {z}")
    ps = [int(p) for p in primes_upto(z - 1)]
    num = _prod_tree([p - 1 for p in ps])
    den = _prod_tree(ps)
    value = _ratio_to_float(num, den)
    return ConstantValue(value, abs(value) * 4 * _EPS)


def coprime_density_fraction(z: int) -> Fraction:
    ps = [int(p) for p in primes_upto(z - 1)]
    return Fraction(_prod_tree([p - 1 for p in ps]), _prod_tree(ps))


# ---------------------------------------------------------------------------
# Buchstab function


_BUCHSTAB_STEP = 1e-5
_BUCHSTAB_UMAX = 25.0
_BUCHSTAB_RADIUS = 1e-8


@lru_cache(maxsize=1)
def _buchstab_grid() -> tuple[np.ndarray, np.ndarray]:
    """Grid of u * omega(u) on [1, UMAX] with step aligned to the integers."""
    per_unit = round(1.0 / _BUCHSTAB_STEP)
    h = 1.0 / per_unit
    units = int(_BUCHSTAB_UMAX) - 1
    u = 1.0 + np.arange(units * per_unit + 1) * h
    y = np.empty_like(u)
    # closed forms: omega = 1/u on [1,2], (1 + log(u-1))/u on (2,3]
    y[: per_unit + 1] = 1.0
    seg = u[per_unit : 2 * per_unit + 1]
    y[per_unit : 2 * per_unit + 1] = 1.0 + np.log(seg - 1.0)
    # beyond 3: y'(u) = omega(u-1) = y(u-1)/(u-1), trapezoid on the aligned grid
    for m in range(2, units):
        s = m * per_unit
        prev = slice(s - per_unit, s + 1)
        f = y[prev] / u[prev]
        inc = np.concatenate(([0.0], np.cumsum((f[:-1] + f[1:]) * (h / 2))))
        y[s : s + per_unit + 1] = y[s] + inc
    return u, y


def buchstab_omega(u: float) -> ConstantValue:
    """Buchstab's function omega(u), radius 1e-8 for u <= 20."""
    if u < 1:
        raise ValueError(f"Buchstab omega needs u >= 1, got {u}")
    if u <= 2:
        return ConstantValue(1.0 / u, _EPS / u)
    if u <= 3:
        return ConstantValue((1.0 + math.log(u - 1.0)) / u, 4 * _EPS)
    if u > _BUCHSTAB_UMAX:
        raise ValueError(f"Buchstab grid only reaches u = {_BUCHSTAB_UMAX}")
    grid_u, grid_y = _buchstab_grid()
    i = min(int((u - 1.0) / _BUCHSTAB_STEP), len(grid_u) - 2)
    t = (u - grid_u[i]) / _BUCHSTAB_STEP
    y = (1 - t) * grid_y[i] + t * grid_y[i + 1]
    return ConstantValue(float(y / u), _BUCHSTAB_RADIUS)


@dataclass(frozen=True)
class WindowParams:
    """Expected rough counts for windows of width H at threshold z."""

    H: int
    z: int
    R: ConstantValue
    R_prime: ConstantValue

    @property
    def ratio(self) -> ConstantValue:
        return self.R_prime / self.R


def window_params(H: int, z: int) -> WindowParams:
    """R = e^{-gamma} H / log z and R' = H prod_{p<z} (1 - 1/p)."""
    if H < 1 or z < 3:
        raise ValueError(f"need H >= 1 and z >= 3, got H={H}, z={z}")
    R = exp_neg_gamma() * H / ConstantValue(math.log(z), math.log(z) * _EPS)
    R_prime = coprime_density(z) * H
    return WindowParams(H=H, z=z, R=R, R_prime=R_prime)


def buchstab_count_check(X: int, z: int, segment_size: int = 1 << 24) -> dict:
    """Empirical count of n < X free of prime factors below z, against
    omega(u) X / log z - z / log z with u = log X / log z."""
    if z < 3 or X <= z:
        raise ValueError("need z >= 3 and X > z")
    empirical = rough_count(RangeSpec(0, X), z, segment_size)
    u = math.log(X) / math.log(z)
    predicted = buchstab_omega(u).value * X / math.log(z) - z / math.log(z)
    return {
        "X": X,
        "z": z,
        "u": u,
        "empirical_count": empirical,
        "predicted": predicted,
        "relative_error": abs(empirical - predicted) / predicted,
    }
