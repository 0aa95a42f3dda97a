"""Consecutive-prime gap enumeration and rough-containment classification.

A gap (p, p_next) "contains a rough number" if some p < m < p_next has
least prime factor >= p_next - p.  Exceptional gaps are those that do not.
"""
from __future__ import annotations

import hashlib
import json
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Iterator

import numpy as np

from .sieve import (
    RangeSpec,
    least_prime_factor,
    lpf_small_array,
    prime_mask,
    primes_upto,
)

# Gap-interior lpf values are certified against primes below this bound;
# larger least prime factors are treated as +inf.  Must exceed every gap
# length encountered (max gap below 2^48 is far under 2000).
LPF_BOUND = 2048

# Segments are sieved this far past their end so p_next is always found.
HALO = 10_000

_CHECKPOINT_VERSION = 1


class NonConsecutiveError(ValueError):
    """The two primes passed to classify_gap are not consecutive."""


class CheckpointMismatchError(RuntimeError):
    """Checkpoint on disk was written by a different scan configuration."""


@dataclass(frozen=True)
class GapRecord:
    p: int
    p_next: int
    gap_len: int
    contains_rough: bool
    witness: int | None
    strict_contains: bool


@dataclass
class GapScanReport:
    """Aggregate statistics of one scan; prime ownership is p in [lo, hi]."""

    lo: int
    hi: int
    total_gaps: int = 0
    n_exceptional: int = 0
    strict_n_exceptional: int = 0
    # gap length -> (count_total, count_exceptional)
    by_length: dict[int, tuple[int, int]] = field(default_factory=dict)

    def merge(self, other: "GapScanReport") -> None:
        self.total_gaps += other.total_gaps
        self.n_exceptional += other.n_exceptional
        self.strict_n_exceptional += other.strict_n_exceptional
        for g, (t, e) in other.by_length.items():
            t0, e0 = self.by_length.get(g, (0, 0))
            self.by_length[g] = (t0 + t, e0 + e)

    def to_dict(self) -> dict:
        return {
            "lo": self.lo,
            "hi": self.hi,
            "total_gaps": self.total_gaps,
            "n_exceptional": self.n_exceptional,
            "strict_n_exceptional": self.strict_n_exceptional,
            "by_length": {str(g): list(v) for g, v in sorted(self.by_length.items())},
        }

    @classmethod
    def from_dict(cls, d: dict) -> "GapScanReport":
        rep = cls(lo=d["lo"], hi=d["hi"])
        rep.total_gaps = d["total_gaps"]
        rep.n_exceptional = d["n_exceptional"]
        rep.strict_n_exceptional = d["strict_n_exceptional"]
        rep.by_length = {int(g): tuple(v) for g, v in d["by_length"].items()}
        return rep


def classify_gap(p: int, p_next: int) -> GapRecord:
    """Classify a single gap between the consecutive primes p < p_next."""
    if least_prime_factor(p) != p or least_prime_factor(p_next) != p_next:
        raise NonConsecutiveError(f"{p} and {p_next} must both be prime")
    g = p_next - p
    witness = None
    strict = False
    for m in range(p + 1, p_next):
        lpf = least_prime_factor(m)
        if lpf == m:
            raise NonConsecutiveError(f"prime {m} lies strictly between {p} and {p_next}")
        if lpf >= g and witness is None:
            witness = m
        if lpf > g:
            strict = True
    return GapRecord(
        p=p,
        p_next=p_next,
        gap_len=g,
        contains_rough=witness is not None,
        witness=witness,
        strict_contains=strict,
    )


def _segment_arrays(seg_lo: int, seg_hi: int, scan_lo: int, scan_hi: int,
                    base_primes: np.ndarray):
    """Sieve one segment (with halo) and return per-gap arrays.

    Returns (pvals, gaps, gap_max) where pvals are the owner primes in
    [max(seg_lo, scan_lo), min(seg_hi, scan_hi + 1)), gaps their gap lengths
    and gap_max the largest interior lpf value (primes below LPF_BOUND;
    65535 stands for "no factor below LPF_BOUND").
    """
    lo = seg_lo
    hi = seg_hi + HALO
    mask = prime_mask(lo, hi, base_primes)
    ppos = np.flatnonzero(mask)
    if len(ppos) < 2:
        raise RuntimeError(f"halo {HALO} too small to find consecutive primes near {seg_lo}")

    eff = lpf_small_array(lo, hi, LPF_BOUND)
    eff = np.where(eff == 0, np.uint16(65535), eff)
    eff[ppos] = 0  # primes are interval endpoints, never witnesses

    pvals = ppos + lo
    owner = (pvals >= scan_lo) & (pvals < min(seg_hi, scan_hi + 1))
    owner[-1] = False  # last prime in the window has no successor here
    idx = np.flatnonzero(owner)
    if len(idx) == 0:
        return pvals[:0], pvals[:0], pvals[:0]
    if pvals[idx[-1] + 1] - pvals[idx[-1]] > HALO:
        raise RuntimeError("prime gap exceeds halo size")

    starts = ppos[:-1] + 1
    seg_max = np.maximum.reduceat(eff, starts)
    gaps = (pvals[1:] - pvals[:-1])[idx]
    if gaps.max(initial=0) >= LPF_BOUND:
        raise RuntimeError(f"gap length {gaps.max()} exceeds LPF_BOUND {LPF_BOUND}")
    # (2,3) is the only gap with an empty interior; reduceat degenerates
    # there to a single (prime) cell, which already reads 0.
    return pvals[idx], gaps.astype(np.int64), seg_max[idx].astype(np.int64)


def _segment_report(seg_lo: int, seg_hi: int, scan_lo: int, scan_hi: int,
                    base_primes: np.ndarray) -> GapScanReport:
    pvals, gaps, gmax = _segment_arrays(seg_lo, seg_hi, scan_lo, scan_hi, base_primes)
    rep = GapScanReport(lo=scan_lo, hi=scan_hi)
    rep.total_gaps = len(pvals)
    if rep.total_gaps == 0:
        return rep
    exceptional = gmax < gaps
    strict_exceptional = gmax <= gaps
    rep.n_exceptional = int(np.count_nonzero(exceptional))
    rep.strict_n_exceptional = int(np.count_nonzero(strict_exceptional))
    tot = np.bincount(gaps)
    exc = np.bincount(gaps[exceptional], minlength=len(tot))
    for g in np.flatnonzero(tot):
        rep.by_length[int(g)] = (int(tot[g]), int(exc[g]))
    return rep


def _config_digest(lo: int, hi: int, segment_size: int) -> str:
    blob = json.dumps({"lo": lo, "hi": hi, "segment_size": segment_size},
                      sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(blob.encode()).hexdigest()


def scan(
    lo: int,
    hi: int,
    *,
    threads: int = 1,
    segment_size: int = 1 << 22,
    checkpoint_path: str | None = None,
) -> GapScanReport:
    """Scan all gaps whose lower prime p lies in the closed range [lo, hi].

    Deterministic: the report is independent of threads and segment_size.
    If checkpoint_path is given, progress is persisted after each segment
    and an interrupted scan resumes to a byte-identical report.
    """
    if lo < 2:
        raise ValueError(f"need lo >= 2, got {lo}")
    if hi < lo:
        raise ValueError(f"need hi >= lo, got [{lo}, {hi}]")
    digest = _config_digest(lo, hi, segment_size)
    seg_bounds = [(a, min(a + segment_size, hi + 1)) for a in range(lo, hi + 1, segment_size)]

    start_idx = 0
    report = GapScanReport(lo=lo, hi=hi)
    if checkpoint_path and os.path.exists(checkpoint_path):
        with open(checkpoint_path) as f:
            ck = json.load(f)
        if ck.get("version") != _CHECKPOINT_VERSION or ck.get("config_digest") != digest:
            raise CheckpointMismatchError(f"checkpoint {checkpoint_path} does not match this scan")
        start_idx = ck["next_segment"]
        report = GapScanReport.from_dict(ck["partial"])

    base = primes_upto(math.isqrt(hi + HALO))

    def work(bounds):
        a, b = bounds
        return _segment_report(a, b, lo, hi, base)

    pending = seg_bounds[start_idx:]
    if threads <= 1:
        results: Iterator[GapScanReport] = map(work, pending)
    else:
        pool = ThreadPoolExecutor(max_workers=threads)
        results = pool.map(work, pending)
    for k, part in enumerate(results, start=start_idx + 1):
        report.merge(part)
        if checkpoint_path:
            ck = {
                "version": _CHECKPOINT_VERSION,
                "config_digest": digest,
                "next_segment": k,
                "cursor": seg_bounds[k - 1][1] - 1,
                "partial": report.to_dict(),
            }
            tmp = checkpoint_path + ".tmp"
            with open(tmp, "w") as f:
                json.dump(ck, f)
            os.replace(tmp, checkpoint_path)
    if threads > 1:
        pool.shutdown()
    return report


def scan_records(lo: int, hi: int, segment_size: int = 1 << 22) -> Iterator[GapRecord]:
    """Yield every gap with p in [lo, hi] as a full GapRecord (with witness).

    Desk-scale helper backing the gaps.csv export; one Python-level loop
    per gap, so keep hi moderate.
    """
    if lo < 2:
        raise ValueError(f"need lo >= 2, got {lo}")
    base = primes_upto(math.isqrt(hi + HALO))
    for a in range(lo, hi + 1, segment_size):
        b = min(a + segment_size, hi + 1)
        mask = prime_mask(a, b + HALO, base)
        ppos = np.flatnonzero(mask)
        eff = lpf_small_array(a, b + HALO, LPF_BOUND)
        eff = np.where(eff == 0, np.uint16(65535), eff)
        eff[ppos] = 0
        pvals = ppos + a
        for i in range(len(ppos) - 1):
            p = int(pvals[i])
            if p < lo or p >= b or p > hi:
                continue
            p_next = int(pvals[i + 1])
            g = p_next - p
            interior = eff[ppos[i] + 1 : ppos[i + 1]]
            hits = interior >= g
            witness = None
            if hits.any():
                witness = p + 1 + int(np.argmax(hits))
            strict = bool((interior > g).any())
            yield GapRecord(p, p_next, g, witness is not None, witness, strict)


def gap_flags(lo: int, hi: int, segment_size: int = 1 << 22):
    """(p, gap_len, exceptional, strict_exceptional) arrays for p in [lo, hi], ascending."""
    base = primes_upto(math.isqrt(hi + HALO))
    ps, gs, ex, st = [], [], [], []
    for a in range(lo, hi + 1, segment_size):
        b = min(a + segment_size, hi + 1)
        pvals, gaps, gmax = _segment_arrays(a, b, lo, hi, base)
        ps.append(pvals)
        gs.append(gaps)
        ex.append(gmax < gaps)
        st.append(gmax <= gaps)
    return (np.concatenate(ps), np.concatenate(gs),
            np.concatenate(ex), np.concatenate(st))


def proportion_series(n_max: int, stride: int = 1) -> list[tuple[int, float, float]]:
    """(N, proportion of exceptional gaps among the first N, proportion * log N).

    Gap index is 1-based on the full gap sequence starting at (2, 3); the
    vacuous gap (2, 3) counts as exceptional.
    """
    if n_max < 1:
        raise ValueError(f"need n_max >= 1, got {n_max}")
    # Overshooting bound on p_{n_max+1}.
    n = max(n_max + 2, 6)
    bound = int(n * (math.log(n) + math.log(math.log(n)))) + 100
    while True:
        _, _, exceptional, _ = gap_flags(2, bound)
        if len(exceptional) >= n_max:
            break
        bound *= 2
    cum = np.cumsum(exceptional[:n_max])
    out = []
    for i in range(0, n_max, stride):
        N = i + 1
        frac = cum[i] / N
        out.append((N, float(frac), float(frac * math.log(N))))
    if out[-1][0] != n_max:
        N = n_max
        frac = cum[-1] / N
        out.append((N, float(frac), float(frac * math.log(N))))
    return out


def classify_exception_scenario(
    g: GapRecord,
    H: int,
    z: int,
    zero_window_oracle: Callable[[int, int], bool],
    range_hi: int | None = None,
) -> set[str]:
    """Assign an exceptional gap to the scenarios that explain it.

    zero_window_oracle(a, b) must answer whether [a, b) intersects the set
    of window starts x whose window (x, x+H] holds no number that is free
    of prime factors below z.
    """
    if g.contains_rough:
        raise ValueError("scenario classification only applies to exceptional gaps")
    if H < 1 or z < 2:
        raise ValueError("need H >= 1 and z >= 2")
    labels: set[str] = set()
    if g.gap_len <= 2 * H:
        labels.add("small_gap")
    if g.gap_len >= z:
        labels.add("large_gap")
    if range_hi is not None and g.p_next > range_hi:
        labels.add("boundary")
    if not labels and zero_window_oracle(g.p, g.p_next - H):
        # (i), (ii), (iv) all failed, so the whole stretch [p, p_next - H)
        # must consist of zero-window starts.
        labels.add("exceptional_window")
    return labels
