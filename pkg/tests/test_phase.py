import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from oscillorm.errors import DegenerateError, DomainError
from oscillorm.ineq import Cutoff
from oscillorm.phase import (
    duhamel_phase,
    fresnel_bound_check,
    log_slope,
    nonstationary_decay_check,
    quadratic_model,
    remainder_ladder,
    sm_report,
    stationary_leading_term,
    verify_sp_conditions,
)
from oscillorm.quad import OscIntegrand, composite_quadrature
from oscillorm.theory import PhaseFamily

# [DERIVED] oracle: Fresnel integrals, int_0^1 exp(400 i (s - 1/2)^2) ds
QUADRATIC_400 = 0.060112518481344475 + 0.05836708999296231j


def test_conditions_hold_for_centred_quadratic():
    rep = verify_sp_conditions(quadratic_model(1.0), 0.1)
    assert rep.z == pytest.approx(0.5, abs=1e-12)
    assert rep.phase_dd_at_z == pytest.approx(2.0)
    assert rep.margin_i == pytest.approx(0.4, abs=1e-12)
    assert rep.margin_ii == pytest.approx(0.8, rel=1e-6)
    assert rep.all_hold


def test_linear_phase_has_no_stationary_point():
    f = OscIntegrand((lambda s: s, lambda s: 1.0 + 0 * s), (lambda s: 1.0 + 0 * s,), 1.0, 0.0, 1.0)
    rep = verify_sp_conditions(f, 0.1)
    assert rep.z is None and not rep.cond_i and not rep.all_hold
    with pytest.raises(DegenerateError):
        remainder_ladder(f, [10.0, 100.0])


def test_strip_too_wide():
    with pytest.raises(DomainError):
        verify_sp_conditions(quadratic_model(1.0), 0.5)


def test_leading_term_against_fresnel_oracle():
    f = quadratic_model(400.0)
    lead = stationary_leading_term(f, 0.5).value
    assert abs(lead - math.sqrt(math.pi / 400) * np.exp(1j * math.pi / 4)) <= 1e-15
    # the difference is the endpoint contribution, O(1/lam)
    assert abs(composite_quadrature(f) - QUADRATIC_400) <= 1e-12
    assert abs(QUADRATIC_400 - lead) * 400 <= 2.0


def test_negative_curvature_flips_the_phase():
    lead = stationary_leading_term(quadratic_model(400.0, sign=-1.0), 0.5).value
    assert np.angle(lead) == pytest.approx(-math.pi / 4)


@given(st.floats(2.0, 3.0), st.floats(1.2, 2.0), st.sampled_from([1, 2, 3]))
def test_duhamel_phase_derivatives(t, R, n):
    f = duhamel_phase(t, R, n)
    s, h = 0.37, 1e-5
    for m in range(1, 4):
        fd = (f.phi(np.array([s + h]), m - 1) - f.phi(np.array([s - h]), m - 1)) / (2 * h)
        assert f.phi(np.array([s]), m)[0] == pytest.approx(fd[0], rel=1e-6)
    fd = (f.amp(np.array([s + h])) - f.amp(np.array([s - h]))) / (2 * h)
    assert f.amp(np.array([s]), 1)[0] == pytest.approx(fd[0], rel=1e-6)
    z = t - R
    if 0 < z < 1:
        assert f.phi(np.array([z]), 1)[0] == pytest.approx(0.0, abs=1e-12)


def test_duhamel_stationary_point_located():
    rep = verify_sp_conditions(duhamel_phase(2.5, 2.0, 1), 0.125)
    assert rep.z == pytest.approx(0.5, abs=1e-10)
    assert rep.phase_dd_at_z == pytest.approx(2 * 4 / 8)      # 2R^2/(t-s)^3 = 2/R
    assert rep.all_hold


def test_duhamel_requires_positive_time_gap():
    with pytest.raises(DomainError):
        duhamel_phase(1.0, 0.5, 1)


def test_remainder_ladder_scaled_values():
    rep = remainder_ladder(quadratic_model(1.0), [100.0, 1000.0, 10000.0])
    assert np.allclose(rep.scaled, rep.lambdas * np.abs(rep.values - rep.leading))
    assert rep.spread == pytest.approx(rep.scaled.max() / rep.scaled.min())
    assert rep.spread < 1.1


def test_nonstationary_decay_beats_polynomial():
    psi = Cutoff()
    lams = [4.0, 8.0, 16.0, 32.0, 64.0]
    rep = nonstationary_decay_check(psi, lams, breakpoints=psi.breakpoints[1:3])
    assert rep.max_ratio <= 1.0
    assert rep.slope < -3          # faster than any fixed power we test against


def test_fresnel_decay_slope():
    rep = fresnel_bound_check([10.0 ** e for e in range(1, 7)])
    assert rep.slope == pytest.approx(-0.5, abs=0.03)
    assert rep.max_ratio <= 1.0
    with pytest.raises(DomainError):
        fresnel_bound_check([-1.0])


@pytest.mark.parametrize("fam", [(1, 1, 1), (1, 2, 2), (2, 1, 3), (2, 2, 1)])
def test_completed_square_main_term(fam):
    rep = sm_report(PhaseFamily(*fam), 20000.0, 0.6)
    assert rep.residual <= 0.05 * rep.main
    assert rep.scaled == pytest.approx(math.sqrt(20000.0) * abs(rep.value))


def test_log_slope_of_power_law():
    x = np.array([1.0, 2.0, 4.0, 8.0])
    assert log_slope(x, 3 * x ** -0.75) == pytest.approx(-0.75)
