import cmath
import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from oscillorm.errors import ConfigError, DomainError, ResolutionError
from oscillorm.schrod import (
    N_CAP,
    CounterexampleConfig,
    ShellRegion,
    expected_slope,
    forcing_norm,
    leading_u,
    necessary_condition,
    ratio_growth,
    shell_contains,
    shell_lower_bound,
    shell_profile,
    solution_u,
    space_time_norm,
    stationary_margins,
)
from oscillorm.theory import LebesguePoint

unit = st.floats(0.0, 1.0, allow_nan=False)


@given(st.integers(1, 3), unit, unit)
def test_necessary_condition_is_the_gap_rule(n, a, b):
    assert necessary_condition(n, LebesguePoint(a, b)) == (abs(a - b) <= 1 / n)


@given(st.integers(1, 3), unit, unit)
def test_expected_slope_positive_exactly_when_condition_fails(n, a, b):
    p = LebesguePoint(a, b)
    if expected_slope(n, p) > 1e-12:
        assert not necessary_condition(n, p)


def test_necessary_condition_rejects_dimension_zero():
    with pytest.raises(DomainError):
        necessary_condition(0, LebesguePoint(0.5, 0.5))


def test_expected_slope_values():
    assert expected_slope(1, LebesguePoint(1, 0)) == 0
    assert expected_slope(3, LebesguePoint(1, 0.25)) == pytest.approx(1.25)
    assert expected_slope(2, LebesguePoint(0.5, 0.5)) == -1


def test_config_validation():
    p = LebesguePoint(1, 0)
    with pytest.raises(ConfigError):
        CounterexampleConfig(32.0, 1, p)
    with pytest.raises(ConfigError):
        CounterexampleConfig(64.0, 4, p)
    with pytest.raises(ConfigError):
        CounterexampleConfig(64.0, 1, p, eta=0.5)
    with pytest.raises(ConfigError):
        CounterexampleConfig(64.0, 1, p, t_samples=(1.5,))
    assert CounterexampleConfig(64.0, 2, p).at(128.0).N == 128.0


def test_shell_region():
    sh = ShellRegion.of(2.5, 100.0, 0.1)
    assert sh.inner == pytest.approx(350.001) and sh.outer == pytest.approx(449.999)
    cfg = CounterexampleConfig(100.0, 1, LebesguePoint(1, 0))
    assert shell_contains(2.5, 400.0, cfg) and not shell_contains(2.5, 300.0, cfg)
    with pytest.raises(DomainError):
        ShellRegion.of(3.5, 100.0, 0.1)


@pytest.mark.parametrize("n", [1, 2, 3])
def test_forcing_norm_is_ball_volume_power(n):
    cfg = CounterexampleConfig(128.0, n, LebesguePoint(0.5, 0.25))
    vol = math.pi ** (n / 2) / math.gamma(n / 2 + 1) * (0.1 / 128.0) ** n
    assert forcing_norm(cfg) == pytest.approx(vol ** 0.75, rel=1e-12)


def _boundary_share(n, N, t, R):
    """Boundary terms of the time integral relative to its stationary main term."""
    lam = N * N
    phi = lambda s: R * R / (t - s) - s
    dphi = lambda s: R * R / (t - s) ** 2 - 1
    amp = lambda s: (t - s) ** (-n / 2)
    ends = sum(sign * amp(s) * cmath.exp(1j * lam * phi(s)) / (1j * lam * dphi(s))
               for s, sign in ((1.0, 1), (0.0, -1)))
    z = t - R
    main = math.sqrt(math.pi * R / lam) * amp(z) * cmath.exp(1j * (lam * phi(z) + math.pi / 4))
    return ends / main


@pytest.mark.parametrize("n", [1, 2, 3])
@pytest.mark.parametrize("N", [128.0, 512.0, 1024.0])
@pytest.mark.parametrize("t", [2.25, 2.5])
def test_solution_is_main_term_plus_boundary_terms(n, N, t):
    # [DERIVED] stationary main term plus the two first-order boundary terms at s = 0, 1
    cfg = CounterexampleConfig(N, n, LebesguePoint(1, 0), eta=1e-3)
    x = 4 * N
    ratio = solution_u(t, x, cfg) / leading_u(t, x, cfg)
    assert abs(ratio - 1 - _boundary_share(n, N, t, x / (2 * N))) < 5e-5


@pytest.mark.parametrize("n", [1, 2, 3])
def test_leading_term_within_small_ball_tolerance(n):
    cfg = CounterexampleConfig(128.0, n, LebesguePoint(1, 0))
    assert abs(solution_u(2.5, 512.0, cfg) / leading_u(2.5, 512.0, cfg) - 1) < 2 * cfg.eta


def test_phase_shift_multiplies_solution():
    cfg = CounterexampleConfig(128.0, 2, LebesguePoint(1, 0))
    u = solution_u(2.5, 512.0, cfg)
    assert abs(solution_u(2.5, 512.0, cfg, phase_shift=0.7) - np.exp(0.7j) * u) < 1e-12 * abs(u)


def test_solution_guards():
    cfg = CounterexampleConfig(2 * N_CAP, 1, LebesguePoint(1, 0))
    with pytest.raises(ResolutionError):
        solution_u(2.5, 4 * cfg.N, cfg)
    small = CounterexampleConfig(64.0, 1, LebesguePoint(1, 0))
    with pytest.raises(DomainError):
        solution_u(1.5, 100.0, small)
    with pytest.raises(DomainError):
        leading_u(3.5, 100.0, small)


def test_stationary_margins_hold_on_the_shell():
    cfg = CounterexampleConfig(128.0, 2, LebesguePoint(1, 0))
    for rep, speed in stationary_margins(2.5, 4 * 128.0, cfg):
        assert rep.all_hold and speed > 0


def test_shell_profile_scale():
    cfg = CounterexampleConfig(128.0, 1, LebesguePoint(1, 0))
    prof = shell_profile(2.5, cfg)
    sh = ShellRegion.of(2.5, 128.0, 0.1)
    assert np.all((prof.x > sh.inner) & (prof.x < sh.outer))
    scale = 0.1 * 128.0 ** -2
    assert np.abs(prof.u).min() > 0.1 * scale and np.abs(prof.u).max() < 10 * scale


def test_space_time_norm_positive():
    cfg = CounterexampleConfig(64.0, 1, LebesguePoint(0.5, 0.5), t_samples=(2.0, 2.5, 3.0))
    assert space_time_norm(cfg) > 0


def test_ratio_growth_matches_slope():
    cfg = CounterexampleConfig(64.0, 1, LebesguePoint(1, 0), t_samples=(2.0, 2.5, 3.0))
    fit = ratio_growth(cfg, [64.0, 128.0, 256.0, 512.0])
    assert abs(fit.slope - expected_slope(1, cfg.point)) < 0.1
    with pytest.raises(ConfigError):
        ratio_growth(cfg, [64.0, 128.0])


def test_shell_lower_bound_holds():
    cfg = CounterexampleConfig(64.0, 2, LebesguePoint(1, 0), t_samples=(2.0, 3.0))
    const, worst = shell_lower_bound(cfg, [64.0, 128.0, 256.0])
    assert const > 0 and worst >= 1
