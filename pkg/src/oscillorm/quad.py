"""Oscillation-resolving composite Gauss-Legendre quadrature.

Integrals of the form

    I = \\int_lo^hi a(s) exp(i lam phi(s)) ds

are evaluated on panels of a fixed-order Gauss-Legendre rule.  Panel widths
follow the local frequency ``lam |phi'(s)|`` so that every panel carries at
least ``min_points_per_period`` nodes per local oscillation period.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Sequence

import numpy as np

from .errors import DomainError, NumericalError

__all__ = [
    "Grid1D",
    "OscIntegrand",
    "gauss_legendre",
    "panel_grid",
    "oscillatory_grid",
    "composite_quadrature",
    "gaussian_line_integral",
    "truncated_gaussian",
    "truncated_gaussian_report",
    "GaussianTailReport",
]

PANEL_ORDER = 16
_PROBE_CELLS = 2048
_CHUNK = 1 << 20


@dataclass(frozen=True)
class Grid1D:
    """Quadrature nodes and positive weights on ``[lo, hi]``."""

    nodes: np.ndarray
    weights: np.ndarray
    lo: float
    hi: float

    def __post_init__(self):
        if self.nodes.shape != self.weights.shape:
            raise DomainError("nodes and weights differ in length")
        if self.nodes.size > 1 and not np.all(np.diff(self.nodes) > 0):
            raise DomainError("nodes must be strictly increasing")
        if np.any(self.weights <= 0):
            raise DomainError("weights must be positive")

    def __len__(self):
        return self.nodes.size

    def integrate(self, values) -> complex | float:
        return np.dot(self.weights, values)


@dataclass(frozen=True)
class OscIntegrand:
    """``amplitude(s) * exp(i * lam * phase(s))`` on ``[lo, hi]``.

    ``phase`` lists the phase and its derivatives (``phase[1]`` is required,
    it drives panel sizing); ``amplitude`` lists the amplitude and its
    derivatives.  All callables must accept numpy arrays.
    """

    phase: Sequence[Callable]
    amplitude: Sequence[Callable]
    lam: float
    lo: float
    hi: float
    breakpoints: tuple = field(default=())

    def __post_init__(self):
        if len(self.phase) < 2:
            raise DomainError("phase needs at least the value and first derivative")
        if not len(self.amplitude):
            raise DomainError("amplitude evaluator missing")
        if self.lam < 0:
            raise DomainError(f"frequency lam={self.lam} < 0")
        if not self.hi > self.lo:
            raise DomainError("empty interval")

    def phi(self, s, order=0):
        if order >= len(self.phase):
            raise DomainError(f"phase derivative of order {order} not provided")
        return _broadcast(self.phase[order](s), s)

    def amp(self, s, order=0):
        if order >= len(self.amplitude):
            raise DomainError(f"amplitude derivative of order {order} not provided")
        return _broadcast(self.amplitude[order](s), s)

    def with_lam(self, lam: float) -> "OscIntegrand":
        return OscIntegrand(self.phase, self.amplitude, lam, self.lo, self.hi, self.breakpoints)

    def shifted_phase(self, c: float) -> "OscIntegrand":
        """Same integrand with ``c`` added to the phase."""
        phase = (lambda s, f=self.phase[0]: f(s) + c,) + tuple(self.phase[1:])
        return OscIntegrand(phase, self.amplitude, self.lam, self.lo, self.hi, self.breakpoints)


def _broadcast(v, s):
    return np.broadcast_to(v, np.shape(s)) if np.ndim(v) == 0 else v


@lru_cache(maxsize=16)
def gauss_legendre(order: int = PANEL_ORDER):
    """Reference Gauss-Legendre rule on ``[-1, 1]``."""
    x, w = np.polynomial.legendre.leggauss(order)
    x.setflags(write=False)
    w.setflags(write=False)
    return x, w


def panel_grid(edges, order: int = PANEL_ORDER) -> Grid1D:
    """Composite rule with one ``order``-point panel per interval of ``edges``."""
    edges = np.asarray(edges, dtype=float)
    if edges.ndim != 1 or edges.size < 2 or np.any(np.diff(edges) <= 0):
        raise DomainError("panel edges must be strictly increasing")
    x, w = gauss_legendre(order)
    half = 0.5 * np.diff(edges)
    mid = 0.5 * (edges[1:] + edges[:-1])
    nodes = (mid[:, None] + half[:, None] * x[None, :]).ravel()
    weights = (half[:, None] * w[None, :]).ravel()
    return Grid1D(nodes, weights, float(edges[0]), float(edges[-1]))


def _panel_edges(f: OscIntegrand, ppp: int, order: int, min_panels: int):
    lo, hi = f.lo, f.hi
    brk = sorted({lo, hi, *(b for b in f.breakpoints if lo < b < hi)})
    probe = np.unique(np.concatenate([np.linspace(lo, hi, _PROBE_CELLS + 1), brk]))
    freq = f.lam * np.abs(f.phi(probe, 1))
    if not np.all(np.isfinite(freq)):
        bad = probe[~np.isfinite(freq)][0]
        raise NumericalError(f"phase derivative not finite at s={bad!r}", node=float(bad))
    if freq.max() < 1.0 and min_panels <= 1:
        return np.asarray(brk, dtype=float)
    cell_freq = 1.1 * np.maximum(freq[1:], freq[:-1])
    # panels per unit length: ppp nodes per local period plus a uniform floor
    density = ppp * cell_freq / (2 * np.pi * order) + min_panels / (hi - lo)
    cum = np.concatenate([[0.0], np.cumsum(density * np.diff(probe))])
    edges = []
    # breakpoints stay hard edges; each segment is filled independently
    for a, b in zip(brk[:-1], brk[1:]):
        ia, ib = np.searchsorted(probe, a), np.searchsorted(probe, b)
        need = cum[ib] - cum[ia]
        count = max(1, int(math.ceil(need - 1e-9)))
        targets = cum[ia] + need * np.arange(count) / count
        edges.append(np.interp(targets, cum[ia:ib + 1], probe[ia:ib + 1]))
    edges.append([hi])
    return np.unique(np.concatenate(edges))


def oscillatory_grid(f: OscIntegrand, min_points_per_period: int = 16,
                     order: int = PANEL_ORDER, min_panels: int = 1) -> Grid1D:
    """The panel grid ``composite_quadrature`` uses for ``f``."""
    if min_points_per_period < 8:
        raise DomainError("min_points_per_period must be >= 8")
    return panel_grid(_panel_edges(f, min_points_per_period, order, min_panels), order)


def composite_quadrature(f: OscIntegrand, min_points_per_period: int = 16,
                         order: int = PANEL_ORDER, min_panels: int = 1) -> complex:
    """Integrate ``f.amp * exp(i f.lam f.phi)`` over ``[f.lo, f.hi]``."""
    grid = oscillatory_grid(f, min_points_per_period, order, min_panels)
    return integrate_on(grid, f)


def integrate_on(grid: Grid1D, f: OscIntegrand) -> complex:
    total = 0j
    for start in range(0, len(grid), _CHUNK):
        s = grid.nodes[start:start + _CHUNK]
        vals = f.amp(s) * np.exp(1j * f.lam * f.phi(s))
        if not np.all(np.isfinite(vals)):
            bad = s[~np.isfinite(vals)][0]
            raise NumericalError(f"integrand not finite at s={bad!r}", node=float(bad))
        total += np.dot(grid.weights[start:start + _CHUNK], vals)
    return complex(total)


def gaussian_line_integral(N: float) -> complex:
    """``\\int_R exp(2iN(r-z)^2) dr = sqrt(pi/2N) e^{i pi/4}`` (any ``z``)."""
    if not N > 0:
        raise DomainError(f"N={N!r} must be positive")
    return math.sqrt(math.pi / (2 * N)) * complex(math.cos(math.pi / 4), math.sin(math.pi / 4))


def _check_center(N, z):
    if not N > 0:
        raise DomainError(f"N={N!r} must be positive")
    if not 0.25 <= z <= 0.5:
        raise DomainError(f"z={z!r} outside [1/4, 1/2]")


def _square_integrand(lam: float, z: float, lo=0.0, hi=1.0) -> OscIntegrand:
    return OscIntegrand(
        phase=(lambda r: (r - z) ** 2, lambda r: 2 * (r - z), lambda r: 2.0 + 0 * r),
        amplitude=(lambda r: 1.0 + 0 * r,),
        lam=lam, lo=lo, hi=hi,
    )


def truncated_gaussian(N: float, z: float, min_points_per_period: int = 16) -> complex:
    """``\\int_0^1 exp(2iN(r-z)^2) dr`` by composite quadrature."""
    _check_center(N, z)
    return composite_quadrature(_square_integrand(2 * N, z), min_points_per_period)


@dataclass(frozen=True)
class GaussianTailReport:
    N: float
    z: float
    value: complex
    main: complex
    residual: complex
    tail_left: complex
    tail_right: complex

    @property
    def scaled_residual(self) -> float:
        """``N |value - main|``; bounded if the residual is O(1/N)."""
        return self.N * abs(self.residual)


def truncated_gaussian_report(N: float, z: float, min_points_per_period: int = 16) -> GaussianTailReport:
    """Pair the truncated integral with the full-line value and tail terms.

    The tails are the leading integration-by-parts terms of the two
    half-lines cut off at 0 and 1.
    """
    value = truncated_gaussian(N, z, min_points_per_period)
    main = gaussian_line_integral(N)
    left = 1j * np.exp(2j * N * z * z) / (4 * N * z)
    right = 1j * np.exp(2j * N * (1 - z) ** 2) / (4 * N * (1 - z))
    return GaussianTailReport(N, z, value, main, value - main, complex(left), complex(right))
