"""Stationary and non-stationary phase checks.

Everything here evaluates the oscillatory integrals by brute-force
quadrature (``quad.composite_quadrature``) and compares against the
asymptotic formulas, so the comparisons are independent of the asymptotics.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .errors import DegenerateError, DomainError
from .quad import OscIntegrand, composite_quadrature
from .theory import PhaseFamily

__all__ = [
    "StationaryReport",
    "LeadingTerm",
    "DecayReport",
    "RemainderReport",
    "SmReport",
    "verify_sp_conditions",
    "stationary_leading_term",
    "remainder_ladder",
    "nonstationary_decay_check",
    "fresnel_bound_check",
    "quadratic_model",
    "duhamel_phase",
    "ijk_integrand",
    "oscillatory_integral",
    "sm_report",
    "log_slope",
]

SAFETY = 3.0
_MESH = 1e-3


@dataclass(frozen=True)
class StationaryReport:
    """Margins of the four hypotheses of the stationary phase lemma.

    ``margin_i``: distance from ``z`` to the excluded end strips;
    ``margin_ii``: min |phi'| on the end strips;
    ``margin_iii``: min |phi''| over the interval;
    ``cap_iv``: max of |psi^(m)|, |phi^(m+3)| for m = 0, 1, 2.
    """

    z: float | None
    phase_dd_at_z: float | None
    margin_i: float
    margin_ii: float
    margin_iii: float
    cap_iv: float
    cond_i: bool
    cond_ii: bool
    cond_iii: bool
    cond_iv: bool

    @property
    def all_hold(self) -> bool:
        return self.cond_i and self.cond_ii and self.cond_iii and self.cond_iv


@dataclass(frozen=True)
class LeadingTerm:
    value: complex
    remainder_bound_scale: float


def _first_sign_change(g, lo, hi):
    mesh = np.linspace(lo, hi, max(int(math.ceil((hi - lo) / _MESH)), 2) + 1)
    vals = g(mesh)
    zero = np.flatnonzero(vals == 0)
    if zero.size:
        return mesh[zero[0]], mesh[zero[0]]
    idx = np.flatnonzero(np.sign(vals[1:]) != np.sign(vals[:-1]))
    if not idx.size:
        return None
    return mesh[idx[0]], mesh[idx[0] + 1]


def _locate_stationary(f: OscIntegrand):
    dphi = lambda s: np.asarray(f.phi(np.asarray(s, dtype=float), 1))
    bracket = _first_sign_change(dphi, f.lo, f.hi)
    if bracket is None:
        return None
    a, b = bracket
    fa = dphi(a)
    while b - a > 1e-12:
        m = 0.5 * (a + b)
        fm = dphi(m)
        if fm == 0:
            a = b = m
            break
        if np.sign(fm) == np.sign(fa):
            a, fa = m, fm
        else:
            b = m
    z = 0.5 * (a + b)
    if len(f.phase) > 2:
        dd = float(f.phi(np.array([z]), 2)[0])
        if dd != 0:
            step = float(dphi(np.array([z]))[0]) / dd
            if abs(step) < 1e-9:
                z -= step
    return float(z)


def verify_sp_conditions(f: OscIntegrand, c: float) -> StationaryReport:
    """Locate the stationary point of ``f.phase`` and measure the lemma margins.

    A phase without a sign change of ``phi'`` is reported with ``cond_i``
    false rather than raising.
    """
    if not c > 0 or 2 * c >= f.hi - f.lo:
        raise DomainError(f"strip width c={c!r} incompatible with [{f.lo}, {f.hi}]")
    z = _locate_stationary(f)
    n_mesh = max(int(math.ceil((f.hi - f.lo) / _MESH)), 2) + 1
    mesh = np.linspace(f.lo, f.hi, n_mesh)
    strips = np.concatenate([np.linspace(f.lo, f.lo + c, 257), np.linspace(f.hi - c, f.hi, 257)])
    margin_ii = float(np.min(np.abs(f.phi(strips, 1))))
    if len(f.phase) > 2:
        margin_iii = float(np.min(np.abs(f.phi(mesh, 2))))
    else:
        margin_iii = float("nan")
    caps = []
    for m in range(3):
        if m < len(f.amplitude):
            caps.append(np.max(np.abs(f.amp(mesh, m))))
        if m + 3 < len(f.phase):
            caps.append(np.max(np.abs(f.phi(mesh, m + 3))))
    cap_iv = float(max(caps)) if caps else float("nan")
    if z is None:
        margin_i, dd = -math.inf, None
    else:
        margin_i = min(z - (f.lo + c), (f.hi - c) - z)
        dd = float(f.phi(np.array([z]), 2)[0]) if len(f.phase) > 2 else None
    full_iv = len(f.amplitude) >= 3 and len(f.phase) >= 6
    return StationaryReport(
        z=z,
        phase_dd_at_z=dd,
        margin_i=margin_i,
        margin_ii=margin_ii,
        margin_iii=margin_iii,
        cap_iv=cap_iv,
        cond_i=z is not None and margin_i > 0,
        cond_ii=margin_ii > 0,
        cond_iii=margin_iii > 0,
        cond_iv=full_iv and math.isfinite(cap_iv),
    )


def stationary_leading_term(f: OscIntegrand, z: float) -> LeadingTerm:
    """Main term ``sqrt(2 pi/(lam |phi''(z)|)) psi(z) e^{i lam phi(z) + i sgn pi/4}``."""
    zz = np.array([z], dtype=float)
    dd = float(f.phi(zz, 2)[0])
    if dd == 0:
        raise DegenerateError(f"phi''(z) vanishes at z={z!r}")
    if not f.lam > 0:
        raise DomainError("leading term needs lam > 0")
    mag = math.sqrt(2 * math.pi / (f.lam * abs(dd))) * float(f.amp(zz)[0])
    ph = f.lam * float(f.phi(zz)[0]) + math.copysign(math.pi / 4, dd)
    return LeadingTerm(mag * complex(math.cos(ph), math.sin(ph)), 1.0 / f.lam)


def log_slope(xs, ys) -> float:
    """Least-squares slope of ``log y`` against ``log x``."""
    lx, ly = np.log(np.asarray(xs, float)), np.log(np.asarray(ys, float))
    return float(np.polyfit(lx, ly, 1)[0])


@dataclass(frozen=True)
class RemainderReport:
    lambdas: np.ndarray
    values: np.ndarray
    leading: np.ndarray
    scaled: np.ndarray          # lam * |I - leading|

    @property
    def spread(self) -> float:
        return float(self.scaled.max() / self.scaled.min())


def remainder_ladder(f: OscIntegrand, lambdas, points_per_period: int = 16) -> RemainderReport:
    """``lam |I(lam) - leading term|`` along a frequency ladder."""
    z = _locate_stationary(f)
    if z is None:
        raise DegenerateError("phase has no stationary point")
    lams = np.asarray(lambdas, dtype=float)
    vals, leads = [], []
    for lam in lams:
        g = f.with_lam(lam)
        vals.append(composite_quadrature(g, points_per_period))
        leads.append(stationary_leading_term(g, z).value)
    vals, leads = np.array(vals), np.array(leads)
    return RemainderReport(lams, vals, leads, lams * np.abs(vals - leads))


@dataclass(frozen=True)
class DecayReport:
    lambdas: np.ndarray
    magnitudes: np.ndarray
    bounds: np.ndarray
    constant: float
    ratios: np.ndarray = field(repr=False)
    slope: float

    @property
    def max_ratio(self) -> float:
        return float(self.ratios.max())


def _calibrated(lams, mags, bound: Callable, fit_mask):
    bounds = bound(lams)
    constant = SAFETY * mags[0] / bounds[0]
    ratios = mags / (constant * bounds)
    if fit_mask.sum() >= 2:
        slope = log_slope(lams[fit_mask], mags[fit_mask])
    else:
        slope = float("nan")
    return bounds, constant, ratios, slope


def nonstationary_decay_check(amplitude, lambdas, lo: float = -1.0, hi: float = 2.0,
                              breakpoints: Sequence[float] = (), shift: float = 0.0) -> DecayReport:
    """``|\\int psi(s) e^{i lam s} ds|`` against ``C min{1/(1+lam), 1/(1+lam^2)}``.

    ``amplitude`` is a vectorized callable (e.g. ``ineq.Cutoff()``), assumed
    to vanish at ``lo`` and ``hi``.  The constant is calibrated at the first
    ladder rung.  Magnitudes below the double-precision floor are excluded
    from the slope fit; past that point the quadrature only sees round-off.
    """
    lams = np.asarray(lambdas, dtype=float)
    amp = (lambda s: amplitude(s - shift),)
    brk = tuple(b + shift for b in breakpoints)
    mags = []
    for lam in lams:
        f = OscIntegrand((lambda s: s, lambda s: 1.0 + 0 * s), amp, lam, lo + shift, hi + shift, brk)
        mags.append(abs(composite_quadrature(f, 16, min_panels=24)))
    mags = np.array(mags)
    floor = 1e3 * np.finfo(float).eps * mags.max()
    bound = lambda l: np.minimum(1 / (1 + np.abs(l)), 1 / (1 + l * l))
    fit = (mags > floor) & (lams > 0)
    if fit.sum() > 3:
        keep = np.flatnonzero(fit)[-3:]
        fit = np.zeros_like(fit)
        fit[keep] = True
    b, c, r, s = _calibrated(lams, mags, bound, fit)
    return DecayReport(lams, mags, b, c, r, s)


def fresnel_bound_check(lambdas) -> DecayReport:
    """``|\\int_0^1 e^{i lam s^2} ds|`` against ``C max{1/(1+sqrt lam), 1/(1+lam)}``."""
    lams = np.asarray(lambdas, dtype=float)
    if lams.size == 0 or np.any(lams < 0):
        raise DomainError("ladder must be non-empty with lam >= 0")
    mags = np.array([abs(composite_quadrature(quadratic_model(lam, center=0.0), 16)) for lam in lams])
    bound = lambda l: np.maximum(1 / (1 + np.sqrt(l)), 1 / (1 + l))
    b, c, r, s = _calibrated(lams, mags, bound, lams > 0)
    return DecayReport(lams, mags, b, c, r, s)


def quadratic_model(lam: float, center: float = 0.5, sign: float = 1.0, amplitude=None,
                    lo: float = 0.0, hi: float = 1.0) -> OscIntegrand:
    """``sign (s - center)^2`` phase with unit (or given) amplitude."""
    amp = (lambda s: 1.0 + 0 * s, lambda s: 0 * s, lambda s: 0 * s) if amplitude is None else amplitude
    zero = lambda s: 0 * s
    return OscIntegrand(
        phase=(lambda s: sign * (s - center) ** 2, lambda s: 2 * sign * (s - center),
               lambda s: 2 * sign + 0 * s, zero, zero, zero),
        amplitude=amp, lam=lam, lo=lo, hi=hi,
    )


def duhamel_phase(t: float, R: float, n: int, lam: float = 1.0) -> OscIntegrand:
    """Time integrand of the forced Schroedinger solution.

    Phase ``R^2/(t-s) - s`` with ``R = |x-y|/(2N)`` and amplitude
    ``(t-s)^(-n/2)`` on ``s in [0, 1]``; the stationary point is ``t - R``.
    """
    if not t > 1:
        raise DomainError("need t > 1 so that t - s stays positive on [0, 1]")
    R2 = R * R

    def dphi(m):
        if m == 1:
            return lambda s: R2 / (t - s) ** 2 - 1.0
        return lambda s: R2 * math.factorial(m) / (t - s) ** (m + 1)

    phase = (lambda s: R2 / (t - s) - s,) + tuple(dphi(m) for m in range(1, 6))
    h = n / 2

    def damp(m):
        coef = math.prod(h + i for i in range(m))
        return lambda s: coef * (t - s) ** (-h - m)

    return OscIntegrand(phase, tuple(damp(m) for m in range(3)), lam, 0.0, 1.0)


def ijk_integrand(family: PhaseFamily, N: float, s: float) -> OscIntegrand:
    """``exp(i N (r^j s^k + 2r^2 - 2r)) r^(n-1)`` on ``r in [0, 1]``."""
    if not 0 <= s <= 1:
        raise DomainError(f"s={s!r} outside [0, 1]")
    j, n = family.j, family.n
    c = s ** family.k
    if j == 1:
        phase = (lambda r: (c - 2) * r + 2 * r * r, lambda r: c - 2 + 4 * r, lambda r: 4.0 + 0 * r)
    else:
        phase = (lambda r: (2 + c) * r * r - 2 * r, lambda r: 2 * (2 + c) * r - 2,
                 lambda r: 2 * (2 + c) + 0 * r)
    return OscIntegrand(phase, (lambda r: r ** (n - 1),), N, 0.0, 1.0)


def _ijk_center(family: PhaseFamily, s: float):
    c = s ** family.k
    if family.j == 1:
        return (2 - c) / 4, 4.0
    return 1 / (2 + c), 2 * (2 + c)


def oscillatory_integral(family: PhaseFamily, N: float, s: float, points_per_period: int = 16) -> complex:
    """``I^{j,k}_N(s)``; the transform of the oscillatory test datum is ``omega * I``."""
    return composite_quadrature(ijk_integrand(family, N, s), points_per_period)


@dataclass(frozen=True)
class SmReport:
    N: float
    s: float
    center: float
    value: complex
    main: float                 # |main term| = z^(n-1) sqrt(2 pi/(N phi''))

    @property
    def scaled(self) -> float:
        """``sqrt(N) |I|``."""
        return math.sqrt(self.N) * abs(self.value)

    @property
    def residual(self) -> float:
        return abs(abs(self.value) - self.main)


def sm_report(family: PhaseFamily, N: float, s: float) -> SmReport:
    """Compare ``|I^{j,k}_N(s)|`` with its completed-square main term."""
    z, dd = _ijk_center(family, s)
    value = oscillatory_integral(family, N, s)
    main = z ** (family.n - 1) * math.sqrt(2 * math.pi / (N * dd))
    return SmReport(N, s, z, value, main)
