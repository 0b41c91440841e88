"""Forced Schroedinger solution for a small-ball, linear-phase forcing.

The forcing ``F(s, y) = exp(-i N^2 s)`` on ``[0, 1] x B(eta/N)`` drives a
solution that concentrates on the shell ``|x| ~ 2(t - s) N``.  The Duhamel
integral is evaluated directly: a Gauss rule on the small ball (reduced to
its radius through the spherical average of a plane wave) inside an
oscillation-resolving rule in time.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .errors import ConfigError, DomainError, ResolutionError
from .kernels import duhamel_sum
from .opnorm import ExponentFit, fit_exponent
from .phase import StationaryReport, duhamel_phase, verify_sp_conditions
from .quad import oscillatory_grid
from .theory import BallGeometry, LebesguePoint

__all__ = [
    "CounterexampleConfig",
    "ShellRegion",
    "ShellProfile",
    "N_CAP",
    "DEFAULT_T_SAMPLES",
    "forcing_norm",
    "solution_u",
    "leading_u",
    "shell_contains",
    "shell_profile",
    "stationary_margins",
    "space_time_norm",
    "ratio_growth",
    "expected_slope",
    "shell_lower_bound",
    "necessary_condition",
]

N_CAP = 2.0 ** 10
DEFAULT_T_SAMPLES = tuple(np.linspace(2.0, 3.0, 9))
_RADIAL_NODES = 6
_STRIP = 0.125


@dataclass(frozen=True)
class CounterexampleConfig:
    """``point`` carries ``(1/r, 1/r~)`` in its ``(a, b)`` slots."""

    N: float
    n: int
    point: LebesguePoint
    eta: float = 0.1
    t_samples: tuple = field(default=DEFAULT_T_SAMPLES)
    time_exponent: float = 2.0

    def __post_init__(self):
        if not 0 < self.eta <= 0.25:
            raise ConfigError(f"eta={self.eta!r} outside (0, 1/4]")
        if not self.N >= 64:
            raise ConfigError(f"N={self.N!r} below 2^6")
        if self.n not in (1, 2, 3):
            raise ConfigError("dimensions 1, 2 and 3 are supported")
        if not self.t_samples or any(not 2 <= t <= 3 for t in self.t_samples):
            raise ConfigError("t_samples must be a non-empty subset of [2, 3]")

    def at(self, N: float) -> "CounterexampleConfig":
        return CounterexampleConfig(N, self.n, self.point, self.eta, self.t_samples, self.time_exponent)


@dataclass(frozen=True)
class ShellRegion:
    t: float
    inner: float
    outer: float

    @classmethod
    def of(cls, t: float, N: float, eta: float) -> "ShellRegion":
        if not 2 <= t <= 3:
            raise DomainError(f"t={t!r} outside [2, 3]")
        inner = 2 * (t - 0.75) * N + eta / N
        outer = 2 * (t - 0.25) * N - eta / N
        if not inner < outer:
            raise ConfigError("empty shell")
        return cls(t, inner, outer)

    def contains(self, x_abs: float) -> bool:
        return self.inner < x_abs < self.outer


def forcing_norm(cfg: CounterexampleConfig) -> float:
    """``|B(eta/N)|^(1 - 1/r~)``; the time factor is 1."""
    vol = BallGeometry.of(cfg.n).ball_volume(cfg.eta / cfg.N)
    return vol ** (1 - cfg.point.b)


def shell_contains(t: float, x_abs: float, cfg: CounterexampleConfig) -> bool:
    return ShellRegion.of(t, cfg.N, cfg.eta).contains(x_abs)


@lru_cache(maxsize=8)
def _ball_rule(n: int, radius: float, nodes: int = _RADIAL_NODES):
    x, w = np.polynomial.legendre.leggauss(nodes)
    rho = 0.5 * radius * (x + 1)
    area = BallGeometry.of(n).sphere_area
    return rho, 0.5 * radius * w * area * rho ** (n - 1)


def _check_t(t):
    if not 2 <= t <= 3:
        raise DomainError(f"t={t!r} outside [2, 3]")


def _time_grid(t, x_abs, N, n, points_per_period):
    f = duhamel_phase(t, x_abs / (2 * N), n, lam=N * N)
    return oscillatory_grid(f, points_per_period, min_panels=8)


def solution_u(t: float, x_abs: float, cfg: CounterexampleConfig, points_per_period: int = 8,
               phase_shift: float = 0.0) -> complex:
    """``u(t, x)`` for the small-ball forcing, by direct quadrature.

    ``phase_shift`` multiplies the forcing by ``exp(i phase_shift)``.
    """
    _check_t(t)
    if cfg.N > N_CAP:
        raise ResolutionError(f"N={cfg.N} above the time-quadrature cap {N_CAP}")
    grid = _time_grid(t, x_abs, cfg.N, cfg.n, points_per_period)
    rho, wrho = _ball_rule(cfg.n, cfg.eta / cfg.N)
    val = duhamel_sum(grid.nodes, grid.weights, t, x_abs, cfg.N, cfg.n, rho, wrho, phase_shift)
    return (4 * math.pi) ** (-cfg.n / 2) * val


def _sphere_rule(n: int, m: int = 16):
    """Nodes ``c = cos(angle)`` and probability weights for the direction average."""
    if n == 1:
        return np.array([-1.0, 1.0]), np.array([0.5, 0.5])
    if n == 2:
        th = 2 * math.pi * (np.arange(m) + 0.5) / m
        return np.cos(th), np.full(m, 1.0 / m)
    x, w = np.polynomial.legendre.leggauss(m)
    return x, 0.5 * w


def leading_u(t: float, x_abs: float, cfg: CounterexampleConfig) -> complex:
    """``u`` with each time integral replaced by its stationary-phase main term.

    At the stationary point ``z = t - R`` (``R = |x-y|/2N``) the phase is
    ``2R - t``, its second derivative ``2/R`` and the amplitude ``R^(-n/2)``.
    """
    _check_t(t)
    rho, wrho = _ball_rule(cfg.n, cfg.eta / cfg.N)
    c, wc = _sphere_rule(cfg.n)
    d = np.sqrt(np.maximum(x_abs ** 2 + rho[:, None] ** 2 - 2 * x_abs * rho[:, None] * c[None, :], 0.0))
    R = d / (2 * cfg.N)
    main = np.sqrt(math.pi * R) * R ** (-cfg.n / 2) * np.exp(1j * (cfg.N * d - cfg.N ** 2 * t + math.pi / 4)) / cfg.N
    return (4 * math.pi) ** (-cfg.n / 2) * complex(wrho @ (main @ wc))


def stationary_margins(t: float, x_abs: float, cfg: CounterexampleConfig, samples: int = 5) -> list:
    """Stationary-phase margins for the time integral at ``y`` across the small ball.

    Returns ``(report, endpoint_speed)`` pairs where ``endpoint_speed`` is
    ``R^2/t^2 - (1 - 3/(4t))^2`` (positive on the shell).
    """
    _check_t(t)
    out = []
    r = cfg.eta / cfg.N
    for y in np.linspace(-r, r, samples) * (1 - 1e-9):
        R = abs(x_abs - y) / (2 * cfg.N)
        rep: StationaryReport = verify_sp_conditions(duhamel_phase(t, R, cfg.n), _STRIP)
        out.append((rep, R * R / (t * t) - (1 - 0.75 / t) ** 2))
    return out


@dataclass(frozen=True)
class ShellProfile:
    N: float
    n: int
    t: float
    x: np.ndarray
    x_weights: np.ndarray           # Gauss weights times omega x^(n-1)
    u: np.ndarray


def _shell_nodes(shell: ShellRegion, n: int, points: int):
    xg, wg = np.polynomial.legendre.leggauss(points)
    half = 0.5 * (shell.outer - shell.inner)
    x = shell.inner + half * (xg + 1)
    return x, half * wg * BallGeometry.of(n).sphere_area * x ** (n - 1)


@lru_cache(maxsize=256)
def _profile(N, n, eta, t, points, ppp):
    cfg = CounterexampleConfig(N, n, LebesguePoint(0.5, 0.5), eta, (t,))
    shell = ShellRegion.of(t, N, eta)
    x, w = _shell_nodes(shell, n, points)
    u = np.array([solution_u(t, xi, cfg, ppp) for xi in x])
    return ShellProfile(N, n, t, x, w, u)


def shell_profile(t: float, cfg: CounterexampleConfig, points: int = 24,
                  points_per_period: int = 8) -> ShellProfile:
    """``u(t, .)`` at Gauss nodes across the shell (cached per configuration)."""
    return _profile(float(cfg.N), cfg.n, cfg.eta, float(t), points, points_per_period)


def space_time_norm(cfg: CounterexampleConfig, points: int = 24, points_per_period: int = 8) -> float:
    """Shell-restricted ``L^q_t L^r_x`` norm over ``t_samples`` (equal weights)."""
    inner = []
    for t in cfg.t_samples:
        prof = shell_profile(t, cfg, points, points_per_period)
        a = np.abs(prof.u)
        if math.isinf(cfg.point.p):
            inner.append(a.max())
        else:
            r = cfg.point.p
            inner.append((prof.x_weights @ a ** r) ** (1 / r))
    inner = np.array(inner)
    q = cfg.time_exponent
    if math.isinf(q):
        return float(inner.max())
    return float(np.mean(inner ** q) ** (1 / q))


def expected_slope(n: int, point: LebesguePoint) -> float:
    """``n/r - n/r~ - 1``."""
    return n * point.a - n * point.b - 1


def ratio_growth(cfg: CounterexampleConfig, ladder, points: int = 24,
                 points_per_period: int = 8) -> ExponentFit:
    """Fit ``log(||u|| / ||F||)`` against ``log N`` on ``ladder``."""
    ladder = list(ladder)
    if len(ladder) < 4:
        raise ConfigError("ladder needs at least 4 frequencies")
    pairs = []
    for N in ladder:
        c = cfg.at(N)
        pairs.append((N, space_time_norm(c, points, points_per_period) / forcing_norm(c)))
    return fit_exponent(pairs)


def shell_lower_bound(cfg: CounterexampleConfig, ladder, safety: float = 3.0, points: int = 24,
                      points_per_period: int = 8):
    """Calibrate ``c`` in ``|u| >= c eta^n N^-(1+n)`` at the first rung and test the rest.

    Returns ``(c, worst)`` where ``worst`` is the smallest ratio
    ``|u| / (c eta^n N^-(1+n))`` over every sampled shell point.
    """
    ladder = list(ladder)

    def scaled(N):
        c = cfg.at(N)
        scale = c.eta ** c.n * N ** (-(1 + c.n))
        return np.concatenate([np.abs(shell_profile(t, c, points, points_per_period).u) / scale
                               for t in c.t_samples])

    const = scaled(ladder[0]).min() / safety
    worst = min(scaled(N).min() / const for N in ladder)
    return float(const), float(worst)


def necessary_condition(n: int, point: LebesguePoint) -> bool:
    """``|1/r - 1/r~| <= 1/n``."""
    if n < 1:
        raise DomainError("n must be >= 1")
    return abs(point.a - point.b) <= 1.0 / n
