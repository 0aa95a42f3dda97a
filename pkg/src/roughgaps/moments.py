"""Window-count statistics of rough numbers: histograms, central moments
about R', zero windows, and the N_h decay comparison.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import quad

from .constants import WindowParams, window_params
from .gaps import GapScanReport, scan
from .omega import ch_table
from .sieve import RangeSpec, primes_upto, sieve_rough

K_MAX = 8


@dataclass
class WindowCountHistogram:
    """counts[j] = number of window starts n' in [X, 2X] whose window
    (n', n'+H] holds exactly j numbers free of prime factors below z."""

    X: int
    H: int
    z: int
    counts: dict[int, int] = field(default_factory=dict)

    @property
    def n_starts(self) -> int:
        return self.X + 1

    def total(self) -> int:
        return sum(self.counts.values())

    def weighted_total(self) -> int:
        return sum(j * c for j, c in self.counts.items())


@dataclass
class MomentReport:
    params: WindowParams
    mean: float
    central_moments: dict[int, float]
    zero_windows: int


def window_histogram(X: int, H: int, z: int, segment_size: int = 1 << 24) -> WindowCountHistogram:
    """Exact histogram of rough counts over the windows (n', n'+H],
    n' = X..2X, via a cumulative-sum pass over sieve flags."""
    if H < 1:
        raise ValueError(f"need H >= 1, got {H}")
    if z < 3:
        raise ValueError(f"need z >= 3, got {z}")
    if X < 1:
        raise ValueError(f"need X >= 1, got {X}")
    base = primes_upto(z - 1)
    hist = np.zeros(H + 1, dtype=np.int64)
    # window starts processed in blocks; each block sieves its own flags
    # with an H-wide lookahead
    for s0 in range(X, 2 * X + 1, segment_size):
        s1 = min(s0 + segment_size, 2 * X + 1)
        flags = sieve_rough(RangeSpec(s0 + 1, s1 + H), z, base).flags
        csum = np.concatenate(([0], np.cumsum(flags, dtype=np.int64)))
        counts = csum[H : H + (s1 - s0)] - csum[: s1 - s0]
        hist += np.bincount(counts, minlength=H + 1)
    return WindowCountHistogram(X=X, H=H, z=z,
                                counts={int(j): int(c) for j, c in enumerate(hist) if c})


def window_histogram_bruteforce(X: int, H: int, z: int) -> WindowCountHistogram:
    """Double-loop oracle for small parameters."""
    from .sieve import least_prime_factor

    counts: dict[int, int] = {}
    for n0 in range(X, 2 * X + 1):
        j = sum(1 for n in range(n0 + 1, n0 + H + 1)
                if n > 1 and least_prime_factor(n) >= z)
        counts[j] = counts.get(j, 0) + 1
    return WindowCountHistogram(X=X, H=H, z=z, counts=counts)


def moments(hist: WindowCountHistogram, K_max: int = 6) -> MomentReport:
    """Mean and central moments about R' (the exact-product expectation)."""
    if not 1 <= K_max <= K_MAX:
        raise ValueError(f"need 1 <= K_max <= {K_MAX}, got {K_max}")
    params = window_params(hist.H, hist.z)
    rp = params.R_prime.value
    n = hist.n_starts
    js = np.array(sorted(hist.counts), dtype=np.float64)
    cs = np.array([hist.counts[int(j)] for j in js], dtype=np.float64)
    mean = float(np.sum(js * cs) / n)
    central = {K: float(np.sum(cs * (js - rp) ** K) / n) for K in range(1, K_max + 1)}
    return MomentReport(params=params, mean=mean, central_moments=central,
                        zero_windows=hist.counts.get(0, 0))


def lambda_values(n: int, params: WindowParams, m: int = 0, z: int | None = None) -> dict:
    """The normalized rough indicator Lambda = (H/R') 1_rough, its centered
    variant Lambda_0 = Lambda - 1, and Lambda_m = Lambda^m Lambda_0."""
    if n < 1:
        raise ValueError(f"need n >= 1, got {n}")
    if m < 0:
        raise ValueError(f"need m >= 0, got {m}")
    from .sieve import least_prime_factor

    zz = params.z if z is None else z
    rough = n > 1 and least_prime_factor(n) >= zz
    lam = params.H / params.R_prime.value if rough else 0.0
    lam0 = lam - 1.0
    return {"lambda": lam, "lambda_0": lam0, "lambda_m": lam ** m * lam0}


def zero_window_scan(X: int, H: int, z: int) -> dict:
    """Zero-window count with the Chebyshev bounds (X+1) M_K / R'^K from the
    measured K = 2 and K = 6 central moments."""
    hist = window_histogram(X, H, z)
    rep = moments(hist, K_max=6)
    rp = rep.params.R_prime.value
    n = hist.n_starts
    return {
        "X": X, "H": H, "z": z,
        "zero_windows": rep.zero_windows,
        "chebyshev_bound_K2": n * rep.central_moments[2] / rp ** 2,
        "chebyshev_bound_K6": n * rep.central_moments[6] / rp ** 6,
    }


def zero_window_starts(X: int, H: int, z: int) -> np.ndarray:
    """All window starts n' in [X, 2X] whose window (n', n'+H] holds no
    rough number.  Desk-scale helper backing the scenario bridge."""
    flags = sieve_rough(RangeSpec(X + 1, 2 * X + H + 1), z).flags
    csum = np.concatenate(([0], np.cumsum(flags, dtype=np.int64)))
    counts = csum[H : H + X + 1] - csum[: X + 1]
    return np.flatnonzero(counts == 0) + X


def log_square_integral(X: int) -> float:
    """Numeric quadrature of the gap-count comparator integral over [X, 2X]."""
    val, err = quad(lambda t: 1.0 / math.log(t) ** 2, X, 2 * X, limit=200)
    return val


def nh_decay_check(X: int, h_max: int, report: GapScanReport | None = None,
                   ch_max: int | None = None) -> list[dict]:
    """Exceptional-gap counts by length against the conditional prediction
    c_h * integral_X^{2X} dt/log^2 t."""
    if report is None:
        report = scan(X, 2 * X)
    integral = log_square_integral(X)
    if ch_max is None:
        ch_max = h_max
    chs = {row.h: row.value.value for row in ch_table(min(ch_max, h_max))}
    rows = []
    for h in range(2, h_max + 1):
        n_h = report.by_length.get(h, (0, 0))[1]
        comparator = chs[h] * integral if h in chs else (0.0 if h % 2 or h == 2 else None)
        rows.append({
            "h": h,
            "N_h": n_h,
            "comparator": comparator,
            "ratio": (n_h / comparator) if comparator else None,
            "h2_normalized": n_h * h * h / (X / math.log(X) ** 2),
        })
    return rows
