"""Payment schedules from borrower profiles."""

import math

import numpy as np
import pytest

from repayopt import BorrowerProfile, DomainError, bounds_from_profile
from repayopt.numerics import adaptive_simpson


def test_profile_example_rates():
    # 82k income over 32k subsistence at 10%/30%: m(0)=5, M(0)=15 (thousands),
    # growing at 4%: m(10) = 5 e^{0.4}.
    profile = BorrowerProfile(
        annual_income=82.0, subsistence=32.0, growth=0.04, f_min=0.10, f_max=0.30
    )
    bounds = bounds_from_profile(profile, 25.0)
    assert bounds.minimum.value(0.0) == pytest.approx(5.0)
    assert bounds.maximum.value(0.0) == pytest.approx(15.0)
    assert bounds.minimum.value(10.0) == pytest.approx(7.45912348821, abs=1e-9)


def test_profile_validation():
    with pytest.raises(DomainError):
        BorrowerProfile(annual_income=30.0, subsistence=32.0, growth=0.04, f_min=0.1, f_max=0.3)
    with pytest.raises(ValueError):
        BorrowerProfile(annual_income=82.0, subsistence=32.0, growth=0.04, f_min=0.3, f_max=0.3)
    with pytest.raises(ValueError):
        BorrowerProfile(annual_income=82.0, subsistence=32.0, growth=0.04, f_min=-0.1, f_max=0.3)


def test_zero_growth_constant_bounds():
    profile = BorrowerProfile(
        annual_income=82.0, subsistence=32.0, growth=0.0, f_min=0.10, f_max=0.30
    )
    bounds = bounds_from_profile(profile, 25.0)
    for t in np.linspace(0.0, 25.0, 11):
        assert bounds.minimum.value(float(t)) == pytest.approx(5.0)
        assert bounds.maximum.value(float(t)) == pytest.approx(15.0)


def test_band_strictly_ordered_on_dense_grid():
    profile = BorrowerProfile(
        annual_income=82.0, subsistence=32.0, growth=0.04, f_min=0.10, f_max=0.30
    )
    bounds = bounds_from_profile(profile, 25.0)
    for t in np.linspace(0.0, 25.0, 1001):
        m = bounds.minimum.value(float(t))
        big = bounds.maximum.value(float(t))
        assert 0.0 < m < big


def test_closed_form_integrals_match_quadrature():
    profile = BorrowerProfile(
        annual_income=82.0, subsistence=32.0, growth=0.04, f_min=0.10, f_max=0.30
    )
    bounds = bounds_from_profile(profile, 25.0)
    for rho in (0.0, 0.03, 0.07):
        closed = bounds.minimum.integral(0.0, 25.0, rho)
        quad = adaptive_simpson(
            lambda t: math.exp(-rho * t) * 5.0 * math.exp(0.04 * t), 0.0, 25.0
        )
        assert closed == pytest.approx(quad, abs=1e-10)
