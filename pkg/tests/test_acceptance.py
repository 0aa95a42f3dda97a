"""Acceptance gate: every criterion of the desk profile must hold.

The suite runs once per session; each criterion then asserts individually
so a regression names the exact criterion that broke.
"""
import pytest

from roughgaps.acceptance import CRITERIA, run_acceptance


@pytest.fixture(scope="session")
def results():
    collected = run_acceptance("desk", echo=print)
    return {r.cid: r for r in collected}


@pytest.mark.parametrize("cid,name", [(cid, name) for cid, name, _ in CRITERIA],
                         ids=[f"criterion_{cid}_{name.replace(' ', '_')}"
                              for cid, name, _ in CRITERIA])
def test_criterion(results, cid, name):
    r = results[cid]
    assert r.passed, f"criterion {cid} ({name}): {r.detail}"


def test_all_ten_criteria_ran(results):
    assert sorted(results) == list(range(1, 11))
