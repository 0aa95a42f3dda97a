import math
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from roughgaps.constants import (
    ConstantValue,
    PrecisionError,
    buchstab_count_check,
    buchstab_omega,
    coprime_density,
    coprime_density_fraction,
    euler_gamma_second_method,
    exp_neg_gamma,
    mertens_V,
    mertens_V_fraction,
    twin_prime_constant,
    twin_prime_constant_oracle,
    window_params,
)

finite = st.floats(min_value=-1e6, max_value=1e6, allow_nan=False)
radii = st.floats(min_value=0, max_value=1.0, allow_nan=False)


def test_constant_value_validation():
    with pytest.raises(ValueError):
        ConstantValue(1.0, -1e-9)
    with pytest.raises(ValueError):
        ConstantValue(1.0, float("nan"))


def test_constant_value_contains_overlaps():
    a = ConstantValue(1.0, 0.1)
    assert a.contains(1.05) and not a.contains(1.2)
    assert a.overlaps(ConstantValue(1.15, 0.05))
    assert not a.overlaps(ConstantValue(1.2001, 0.1))


@given(finite, radii, finite, radii, st.integers(-1, 1), st.integers(-1, 1))
@settings(max_examples=300)
def test_interval_arithmetic_encloses_endpoints(va, ra, vb, rb, sa, sb):
    """Operations on endpoint samples stay inside the result interval."""
    a, b = ConstantValue(va, ra), ConstantValue(vb, rb)
    xa, xb = va + sa * ra, vb + sb * rb

    def encloses(cv, x):
        # cushion scales with the inputs: the sampled endpoints are
        # themselves rounded, which the guarantee does not cover
        slack = 1e-14 * max(1.0, abs(xa), abs(xb), abs(x), abs(xa * xb))
        return abs(cv.value - x) <= cv.radius + slack

    assert encloses(a + b, xa + xb)
    assert encloses(a - b, xa - xb)
    assert encloses(a * b, xa * xb)
    if abs(vb) > rb + 1e-6:
        assert encloses(a / b, xa / xb)


def test_division_by_zero_interval():
    with pytest.raises(ZeroDivisionError):
        ConstantValue(1.0, 0.0) / ConstantValue(0.5, 0.6)


def test_twin_prime_constant():
    S = twin_prime_constant()
    assert S.contains(1.3203236316937392)
    assert abs(S.value - 1.3203236) < 1e-7
    assert S.radius < 1e-12


def test_twin_prime_constant_against_oracle():
    S = twin_prime_constant()
    oracle = twin_prime_constant_oracle(10 ** 6)
    assert S.overlaps(oracle)
    assert abs(S.value - oracle.value) < 2e-6


def test_twin_prime_precision_refusal():
    with pytest.raises(PrecisionError):
        twin_prime_constant(1e-20)


def test_exp_neg_gamma_against_independent_gamma():
    gamma2 = euler_gamma_second_method()
    target = exp_neg_gamma()
    assert abs(math.exp(-gamma2.value) - target.value) < 1e-10
    assert gamma2.contains(0.5772156649015329)


def test_mertens_small_values():
    assert mertens_V_fraction(8) == Fraction(1, 7)  # (1/3)(3/5)(5/7)
    assert mertens_V(8).value == pytest.approx(1 / 7, abs=1e-15)
    assert coprime_density_fraction(11) == Fraction(8, 35)
    assert coprime_density(11).value == pytest.approx(8 / 35, abs=1e-15)


def test_mertens_matches_fraction_at_scale():
    v = mertens_V(2000)
    assert v.contains(float(mertens_V_fraction(2000)))


def test_mertens_asymptotic_ratio():
    S = twin_prime_constant()
    c = 2 * S.value * exp_neg_gamma().value ** 2
    prev = None
    for z in (10 ** 3, 10 ** 4, 10 ** 5):
        ratio = mertens_V(z).value * math.log(z) ** 2 / c
        dev = abs(ratio - 1)
        if prev is not None:
            assert dev < prev
        prev = dev
    assert 0.95 < ratio < 1.05


def test_buchstab_closed_forms():
    assert buchstab_omega(2.0).value == 0.5
    assert buchstab_omega(1.0).value == 1.0
    assert buchstab_omega(3.0).value == pytest.approx((1 + math.log(2)) / 3, abs=1e-12)
    # continuity across the closed-form / grid seam
    assert abs(buchstab_omega(3.0).value - buchstab_omega(3.0 + 1e-6).value) < 1e-5


@given(st.floats(min_value=1.0, max_value=19.0), st.floats(min_value=1e-7, max_value=0.5))
@settings(max_examples=100, deadline=None)
def test_buchstab_lipschitz(u, delta):
    """|omega'| <= 1 for u >= 1, with slack for the grid radius."""
    a, b = buchstab_omega(u).value, buchstab_omega(u + delta).value
    assert abs(a - b) <= 2 * delta + 3e-8


@pytest.mark.parametrize("u", range(4, 13))
def test_buchstab_de_bruijn_bound(u):
    limit = exp_neg_gamma().value
    assert abs(buchstab_omega(float(u)).value - limit) <= 10 / math.gamma(u + 1) + 1e-8


def test_buchstab_limit_at_large_u():
    assert abs(buchstab_omega(20.0).value - exp_neg_gamma().value) < 1e-7


def test_buchstab_grid_step_robustness():
    """Linear interpolation agrees with nearby grid points."""
    for u in (3.5, 4.25, 7.77, 12.123):
        v1 = buchstab_omega(u + 1e-5).value
        v2 = buchstab_omega(u - 1e-5).value
        assert abs(v1 - v2) < 1e-4


def test_buchstab_domain():
    with pytest.raises(ValueError):
        buchstab_omega(0.5)
    with pytest.raises(ValueError):
        buchstab_omega(30.0)


def test_window_params():
    wp = window_params(1000, 100)
    assert wp.R.value == pytest.approx(
        exp_neg_gamma().value * 1000 / math.log(100), rel=1e-12)
    assert wp.R_prime.value == pytest.approx(
        1000 * float(coprime_density_fraction(100)), rel=1e-12)
    # the two normalizations agree to first order at z = 100
    assert 0.95 < wp.ratio.value < 1.05


def test_buchstab_count_check_desk():
    out = buchstab_count_check(10 ** 6, 50)
    assert out["relative_error"] < 0.05
    assert out["empirical_count"] > 0
