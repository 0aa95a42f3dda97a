"""Residue classes b mod P(h) whose translates b+1..b+h-1 all have a small
prime factor while b and b+h stay coprime to P(h), and the associated
density constants c_h.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .constants import ConstantValue, twin_prime_constant
from .sieve import Primorial, primes_upto, primorial

# DFS stays minutes-scale and P(h) fits 128 bits up to here.
H_BUDGET = 40

# plain numpy scan is used as the brute-force oracle up to this modulus
BRUTE_FORCE_LIMIT = 10 ** 7


@dataclass(frozen=True)
class OmegaSet:
    h: int
    modulus: Primorial
    residues: tuple[int, ...]
    # per residue: offset i in 1..h-1 -> smallest prime < h dividing b + i
    certificates: tuple[dict[int, int], ...]

    def __contains__(self, b: int) -> bool:
        return b in self.residues

    def __len__(self) -> int:
        return len(self.residues)


@dataclass(frozen=True)
class ChConstant:
    h: int
    omega_count: int
    denom: int
    value: ConstantValue
    cumulative: ConstantValue


def _check_h(h: int) -> None:
    if h < 4 or h % 2:
        raise ValueError(f"need even h >= 4, got {h}")
    if h > H_BUDGET:
        raise ValueError(f"h = {h} exceeds the search budget {H_BUDGET}")


def _certificate(b: int, h: int, hp: list[int]) -> dict[int, int] | None:
    """Smallest dividing prime per interior offset, or None if some offset
    has no prime factor below h."""
    cert: dict[int, int] = {}
    for i in range(1, h):
        for p in hp:
            if (b + i) % p == 0:
                cert[i] = p
                break
        else:
            return None
    return cert


def verify_class(b: int, h: int):
    """Check b mod P(h) membership; returns (True, certificate) or
    (False, first failing condition)."""
    _check_h(h)
    P = primorial(h).value
    if not 0 <= b < P:
        raise ValueError(f"need 0 <= b < P(h) = {P}, got {b}")
    if math.gcd(b, P) != 1:
        return False, f"gcd(b, P(h)) = {math.gcd(b, P)} != 1"
    if math.gcd(b + h, P) != 1:
        return False, f"gcd(b + h, P(h)) = {math.gcd(b + h, P)} != 1"
    hp = [int(p) for p in primes_upto(h - 1)]
    cert = _certificate(b, h, hp)
    if cert is None:
        missing = next(i for i in range(1, h) if all((b + i) % p for p in hp))
        return False, f"b + {missing} has no prime factor below h"
    return True, cert


def omega_bruteforce(h: int) -> tuple[int, ...]:
    """Residues of the class set by a plain scan of all residues mod P(h)."""
    _check_h(h)
    P = primorial(h).value
    if P > BRUTE_FORCE_LIMIT:
        raise ValueError(f"P({h}) = {P} too large for the plain scan")
    hp = [int(p) for p in primes_upto(h - 1)]
    ok = np.ones(P, dtype=bool)
    for p in hp:
        ok[::p] = False                       # p | b
        ok[(-h) % p :: p] = False             # p | b + h
    covered = np.ones(P, dtype=bool)
    for i in range(1, h):
        cov_i = np.zeros(P, dtype=bool)
        for p in hp:
            cov_i[(-i) % p :: p] = True
        covered &= cov_i
    return tuple(int(b) for b in np.flatnonzero(ok & covered))


def _crt_pair(r1: int, m1: int, r2: int, m2: int) -> tuple[int, int]:
    g = pow(m1, -1, m2)
    x = (r1 + (r2 - r1) * g % m2 * m1) % (m1 * m2)
    return x, m1 * m2


def omega_dfs(h: int) -> tuple[int, ...]:
    """Depth-first search over residue choices b mod p for each prime p < h.

    A choice for p covers the offsets i in 1..h-1 with p | b+i; branches are
    pruned when the offsets still uncoverable by the remaining primes are
    nonempty.
    """
    _check_h(h)
    hp = [int(p) for p in primes_upto(h - 1)]
    full = (1 << (h - 1)) - 1  # bit i-1 <-> offset i

    # class_masks[j] = [(c, cover_mask)] for allowed residues c of prime hp[j]
    class_masks: list[list[tuple[int, int]]] = []
    for p in hp:
        options = []
        banned = {0, (-h) % p}
        for c in range(p):
            if c in banned:
                continue
            mask = 0
            for i in range(1, h):
                if (c + i) % p == 0:
                    mask |= 1 << (i - 1)
            options.append((c, mask))
        class_masks.append(options)

    # suffix[j] = union of everything primes hp[j:] could still cover
    suffix = [0] * (len(hp) + 1)
    for j in range(len(hp) - 1, -1, -1):
        acc = 0
        for _, m in class_masks[j]:
            acc |= m
        suffix[j] = suffix[j + 1] | acc

    residues: list[int] = []
    choice: list[int] = [0] * len(hp)

    def rec(j: int, covered: int) -> None:
        if covered | suffix[j] != full:
            return
        if j == len(hp):
            if covered == full:
                b, mod = 0, 1
                for q, c in zip(hp, choice):
                    b, mod = _crt_pair(b, mod, c, q)
                residues.append(b)
            return
        for c, mask in class_masks[j]:
            choice[j] = c
            rec(j + 1, covered | mask)

    rec(0, 0)
    return tuple(sorted(residues))


@lru_cache(maxsize=32)
def omega(h: int) -> OmegaSet:
    """The complete, sorted, certified residue-class set for gap length h."""
    _check_h(h)
    residues = omega_dfs(h)
    hp = [int(p) for p in primes_upto(h - 1)]
    certs = []
    for b in residues:
        cert = _certificate(b, h, hp)
        if cert is None:
            raise AssertionError(f"DFS produced uncovered residue {b} for h={h}")
        certs.append(cert)
    return OmegaSet(h=h, modulus=primorial(h), residues=residues, certificates=tuple(certs))


def c_denominator(h: int) -> int:
    """prod_{2<p<h} (p - 2)."""
    return math.prod(int(p) - 2 for p in primes_upto(h - 1) if p > 2)


def c_constant(h: int, S: ConstantValue | None = None,
               cumulative_below: ConstantValue | None = None) -> ChConstant:
    """c_h = S * |Omega_h| / prod_{2<p<h} (p-2), with propagated radius."""
    if S is None:
        S = twin_prime_constant(1e-9)
    if S.radius > 1e-9:
        raise ValueError("need the twin-prime constant to at least 1e-9")
    if h < 4 or h % 2:
        value = ConstantValue(0.0, 0.0)
        cum = cumulative_below if cumulative_below is not None else ConstantValue(0.0, 0.0)
        return ChConstant(h=h, omega_count=0, denom=1, value=value, cumulative=cum)
    om = omega(h)
    denom = c_denominator(h)
    ratio = Fraction(len(om), denom)
    value = S * ConstantValue(float(ratio), float(ratio) * 2 ** -52)
    cum = value if cumulative_below is None else cumulative_below + value
    return ChConstant(h=h, omega_count=len(om), denom=denom, value=value, cumulative=cum)


def ch_table(h_max: int, S: ConstantValue | None = None) -> list[ChConstant]:
    """c_h and cumulative sums for even h from 4 to h_max."""
    if S is None:
        S = twin_prime_constant(1e-9)
    rows = []
    cum = None
    for h in range(4, h_max + 1, 2):
        row = c_constant(h, S, cumulative_below=cum)
        cum = row.cumulative
        rows.append(row)
    return rows


# Values printed in the source table; compare_table() reports agreement and
# the two known internal inconsistencies (the 0 mod 2310 entry at h=12, and
# the printed c_14 vs the cumulative column).
PRINTED_TABLE: dict[int, dict] = {
    4: {"residues": (1,), "c": 1.3203, "cumulative": 1.3203},
    6: {"residues": (1, 23), "c": 0.8802, "cumulative": 2.2005},
    8: {"residues": (89, 113), "c": 0.1760, "cumulative": 2.3766},
    10: {"residues": (1, 199), "c": 0.1760, "cumulative": 2.5526},
    12: {"residues": (1, 199, 467, 509, 1789, 1831, 2099, 2310, 2297),
         "c": 0.0782, "cumulative": 2.6308},
    14: {"count": 58, "c": 0.0229, "cumulative": 2.6824},
    16: {"count": 12, "c": 0.0107, "cumulative": 2.6931},
    18: {"count": 376, "c": 0.0222, "cumulative": 2.7154},
}


def compare_table(S: ConstantValue | None = None) -> list[dict]:
    """Row-by-row comparison of computed Omega_h / c_h against the printed
    table, including the running-sum consistency check
    c_h = cumulative(h) - cumulative(h-2)."""
    if S is None:
        S = twin_prime_constant(1e-9)
    rows = []
    computed = {row.h: row for row in ch_table(18, S)}
    prev_cum = 0.0
    for h in sorted(PRINTED_TABLE):
        printed = PRINTED_TABLE[h]
        row = computed[h]
        om = omega(h)
        entry = {
            "h": h,
            "computed_count": len(om),
            "computed_c": row.value.value,
            "computed_cumulative": row.cumulative.value,
            "printed_c": printed["c"],
            "printed_cumulative": printed["cumulative"],
            "running_sum_implied_c": round(printed["cumulative"] - prev_cum, 4),
            "notes": [],
        }
        if "residues" in printed:
            bad = [b for b in printed["residues"] if b % om.modulus.value not in om.residues]
            good = tuple(sorted(b % om.modulus.value for b in printed["residues"]) )
            entry["printed_count"] = len(printed["residues"])
            if bad:
                entry["notes"].append(
                    f"printed residues {bad} rejected (not in the computed class set)")
            if tuple(om.residues) != tuple(sorted(set(good) - {b % om.modulus.value for b in bad})):
                entry["notes"].append("printed residue list differs from the computed set")
        else:
            entry["printed_count"] = printed["count"]
        if entry["printed_count"] != len(om):
            entry["notes"].append(
                f"printed count {entry['printed_count']} != computed {len(om)}")
        if abs(printed["c"] - entry["running_sum_implied_c"]) > 5e-4:
            entry["notes"].append(
                f"printed c_{h} = {printed['c']} inconsistent with its own cumulative "
                f"column (implies {entry['running_sum_implied_c']})")
        entry["c_match"] = abs(row.value.value - printed["c"]) < 5e-4
        entry["cumulative_match"] = abs(row.cumulative.value - printed["cumulative"]) < 2e-3
        prev_cum = printed["cumulative"]
        rows.append(entry)
    return rows
