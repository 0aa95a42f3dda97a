import json

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from roughgaps import gaps as gapmod
from roughgaps.gaps import (
    CheckpointMismatchError,
    GapScanReport,
    NonConsecutiveError,
    classify_exception_scenario,
    classify_gap,
    gap_flags,
    proportion_series,
    scan,
    scan_records,
)
from roughgaps.sieve import least_prime_factor, primes_upto

# 1-based indices, among the first 20 gaps, of gaps holding an interior
# number whose least prime factor is at least the gap length
CONTAINING_FIRST_20 = {2, 3, 5, 7, 10, 13, 15, 17, 20}


def brute_report(lo: int, hi: int) -> GapScanReport:
    ps = [int(p) for p in primes_upto(hi + 200)]
    rep = GapScanReport(lo=lo, hi=hi)
    for p, q in zip(ps, ps[1:]):
        if not lo <= p <= hi:
            continue
        rec = classify_gap(p, q)
        rep.total_gaps += 1
        rep.n_exceptional += not rec.contains_rough
        rep.strict_n_exceptional += not rec.strict_contains
        t, e = rep.by_length.get(rec.gap_len, (0, 0))
        rep.by_length[rec.gap_len] = (t + 1, e + (not rec.contains_rough))
    return rep


def test_classify_gap_basics():
    assert classify_gap(2, 3).contains_rough is False  # empty interior
    r = classify_gap(3, 5)
    assert r.witness == 4 and r.contains_rough and not r.strict_contains
    r = classify_gap(7, 11)
    assert not r.contains_rough and r.witness is None
    r = classify_gap(23, 29)
    assert not r.contains_rough  # 24..28 all have a prime factor below 6
    r = classify_gap(139, 149)
    assert r.contains_rough and r.witness == 143  # 143 = 11 * 13, gap length 10
    assert r.strict_contains  # 11 > 10


def test_classify_gap_rejects_bad_input():
    with pytest.raises(NonConsecutiveError):
        classify_gap(7, 13)  # 11 in between
    with pytest.raises(NonConsecutiveError):
        classify_gap(8, 11)


def test_first_20_gap_sequence():
    recs = list(scan_records(2, 80))[:20]
    got = {i for i, r in enumerate(recs, start=1) if r.contains_rough}
    assert got == CONTAINING_FIRST_20


def test_scan_matches_bruteforce():
    rep = scan(2, 3000)
    assert rep.to_dict() == brute_report(2, 3000).to_dict()


def test_scan_records_match_classify_gap():
    for rec in scan_records(2, 2000):
        assert rec == classify_gap(rec.p, rec.p_next)


def test_scan_determinism_threads_and_segments():
    ref = scan(2, 10 ** 5).to_dict()
    for threads in (2, 8):
        assert scan(2, 10 ** 5, threads=threads).to_dict() == ref
    for seg in (1 << 12, 1 << 16):
        assert scan(2, 10 ** 5, segment_size=seg).to_dict() == ref


@given(st.integers(min_value=2, max_value=5000), st.integers(min_value=0, max_value=3000),
       st.integers(min_value=1, max_value=3000))
@settings(max_examples=20, deadline=None)
def test_scan_composability(lo, d1, d2):
    mid = lo + d1
    hi = mid + d2
    left = scan(lo, mid)
    left.merge(scan(mid + 1, hi))
    whole = scan(lo, hi)
    assert (left.total_gaps, left.n_exceptional, left.strict_n_exceptional,
            left.by_length) == (whole.total_gaps, whole.n_exceptional,
                                whole.strict_n_exceptional, whole.by_length)


def test_checkpoint_resume_is_identical(tmp_path, monkeypatch):
    lo, hi, seg = 2, 200_000, 1 << 14
    ck = tmp_path / "scan.json"
    ref = scan(lo, hi, segment_size=seg).to_dict()

    # die after three segments, as an interrupted run would
    real = gapmod._segment_report
    calls = {"n": 0}

    def flaky(*args, **kw):
        calls["n"] += 1
        if calls["n"] > 3:
            raise KeyboardInterrupt
        return real(*args, **kw)

    monkeypatch.setattr(gapmod, "_segment_report", flaky)
    with pytest.raises(KeyboardInterrupt):
        scan(lo, hi, segment_size=seg, checkpoint_path=str(ck))
    monkeypatch.setattr(gapmod, "_segment_report", real)

    saved = json.loads(ck.read_text())
    assert 0 < saved["next_segment"] < (hi - lo) // seg + 1

    resumed = scan(lo, hi, segment_size=seg, checkpoint_path=str(ck))
    assert resumed.to_dict() == ref


def test_checkpoint_config_mismatch(tmp_path):
    ck = tmp_path / "scan.json"
    scan(2, 5000, checkpoint_path=str(ck))
    with pytest.raises(CheckpointMismatchError):
        scan(2, 6000, checkpoint_path=str(ck))


def test_scan_validation():
    with pytest.raises(ValueError):
        scan(1, 10)
    with pytest.raises(ValueError):
        scan(10, 5)


def test_gap_flags_parity_and_strict():
    p, g, ex, st_ex = gap_flags(2, 10 ** 5)
    # strict-exceptional is a superset of exceptional
    assert np.all(st_ex | ~ex)
    # the extra strict-exceptional gaps are exactly the twin gaps
    twins = int(np.count_nonzero(g == 2))
    assert int(np.count_nonzero(st_ex)) - int(np.count_nonzero(ex)) == twins
    # no exceptional gap of odd length or length two
    assert not np.any(ex & ((g % 2 == 1) & (p > 2) | (g == 2)))


def test_proportion_series_values():
    series = proportion_series(20)
    assert [row[0] for row in series] == list(range(1, 21))
    n, frac, prod = series[-1]
    # 9 of the first 20 gaps contain a rough number, 11 are exceptional
    assert n == 20 and frac == pytest.approx(11 / 20)
    assert prod == pytest.approx(frac * np.log(20))
    # the vacuous (2, 3) gap counts as exceptional
    assert series[0][1] == 1.0


def test_proportion_series_stride_keeps_last_point():
    series = proportion_series(1000, stride=64)
    assert series[-1][0] == 1000
    assert all(a[0] < b[0] for a, b in zip(series, series[1:]))


def test_scenario_labels():
    g4 = classify_gap(7, 11)
    assert classify_exception_scenario(g4, 2, 100, lambda a, b: False) == {"small_gap"}
    g6 = classify_gap(23, 29)
    assert classify_exception_scenario(g6, 2, 5, lambda a, b: False) == {"large_gap"}
    assert classify_exception_scenario(
        g6, 2, 100, lambda a, b: False, range_hi=25) == {"boundary"}
    # all structural outs exhausted: the oracle decides
    assert classify_exception_scenario(
        g6, 2, 100, lambda a, b: True) == {"exceptional_window"}
    assert classify_exception_scenario(g6, 2, 100, lambda a, b: False) == set()
    with pytest.raises(ValueError):
        classify_exception_scenario(classify_gap(3, 5), 2, 100, lambda a, b: False)


def test_scenario_exhaustive_on_desk_range():
    """With the oracle as final fallback every exceptional gap gets a label."""
    H, z = 50, 300
    for rec in scan_records(2, 50_000):
        if rec.contains_rough:
            continue
        labels = classify_exception_scenario(rec, H, z, lambda a, b: True,
                                             range_hi=50_000)
        assert labels, rec
