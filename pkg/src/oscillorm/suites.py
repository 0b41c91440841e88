"""Sweep cells and the named check batteries behind ``oscillorm verify``.

Each battery returns a list of :class:`ReportRecord`; the pass/fail flags
are derived afterwards from those rows by :func:`report.summarize`.
"""
from __future__ import annotations

import numpy as np

from . import ineq, phase, quad, schrod
from .errors import OscillormError
from .opnorm import build_operator, norm_2_2, norm_lower_bound
from .report import ReportRecord
from .theory import LebesguePoint, PhaseFamily

__all__ = [
    "SUITES",
    "run_cell",
    "phase_battery",
    "kernels_battery",
    "bilinear_battery",
    "schrodinger_battery",
]

REMAINDER_LADDER = tuple(10.0 ** e for e in np.arange(2.0, 5.01, 0.5))
GAUSSIAN_LADDER = tuple(2.0 ** e for e in range(6, 15))
GAUSSIAN_CENTERS = (0.25, 0.375, 0.5)
FRESNEL_LADDER = tuple(10.0 ** e for e in range(1, 7))
OCTAVE_LADDER = tuple(2.0 ** e for e in range(6, 13))
SCHROD_LADDER = (64.0, 128.0, 256.0, 512.0)
SCHROD_CONFIGS = ((1, 1.0, 0.0), (1, 0.5, 0.5), (2, 0.9, 0.2), (2, 0.5, 0.25), (3, 1.0, 0.25), (3, 0.5, 0.5))
YOUNG_CASES = ((1, 1), (2, 2), (3, 2))


def run_cell(family, N, points, seed=0, points_per_period=8, eta=0.1, restarts=8, steps=200, tol=1e-7):
    """Norm sandwich at every point for one ``(family, N)``; one record per point.

    A numerical failure marks every record of the cell as failed.
    """
    family = PhaseFamily(*family)
    try:
        op = build_operator(family, N, points_per_period=points_per_period, eta=eta)
        c22 = norm_2_2(op, tol=1e-9, seed=seed)
        ests = [norm_lower_bound(op, LebesguePoint(a, b), restarts=restarts, seed=seed,
                                 steps=steps, c22=c22, tol=tol) for a, b in points]
    except OscillormError:
        return [ReportRecord("opnorm", "norm_bounds", family.tag, float(N), float(a), float(b),
                             seed=seed, status="failed") for a, b in points]
    return [ReportRecord("opnorm", "norm_bounds", family.tag, float(N), float(a), float(b),
                         lower=e.lower, upper=e.upper, ratio=e.lower / e.upper, seed=seed)
            for (a, b), e in zip(points, ests)]


def phase_battery() -> list:
    rows = []
    for n in (1, 2, 3):
        rep = phase.remainder_ladder(phase.duhamel_phase(2.5, 2.0, n), REMAINDER_LADDER)
        # only n = 1 carries the spread check; the other dimensions are tabulated
        op = "remainder_duhamel_n1" if n == 1 else f"table_remainder_duhamel_n{n}"
        rows += _remainder_rows(op, rep)
    rows += _remainder_rows("remainder_quadratic", phase.remainder_ladder(phase.quadratic_model(1.0),
                                                                          REMAINDER_LADDER))
    for z in GAUSSIAN_CENTERS:
        for N in GAUSSIAN_LADDER:
            g = quad.truncated_gaussian_report(N, z)
            rows.append(ReportRecord("phase", f"gaussian_z{z}", N=N, x=z, residual=abs(g.residual),
                                     ratio=g.scaled_residual))
    fr = phase.fresnel_bound_check(FRESNEL_LADDER)
    for lam, mag, bnd, r in zip(fr.lambdas, fr.magnitudes, fr.bounds, fr.ratios):
        rows.append(ReportRecord("phase", "fresnel", N=float(lam), lower=float(mag),
                                 upper=float(fr.constant * bnd), ratio=float(r)))
    return rows


def _remainder_rows(op, rep):
    return [ReportRecord("phase", op, N=float(lam), residual=float(abs(v - l)), ratio=float(s))
            for lam, v, l, s in zip(rep.lambdas, rep.values, rep.leading, rep.scaled)]


def kernels_battery() -> list:
    rows = []
    for j in (1, 2):
        for k in (1, 2):
            for r in ineq.kernel_bound_check(j, k, OCTAVE_LADDER):
                rows.append(ReportRecord("ineq", f"kernel_bound_j{j}k{k}", N=r.context["N"],
                                         lower=r.lhs, upper=r.rhs_scale, ratio=r.ratio))
    return rows


def bilinear_battery(seeds: int = 4, hilbert_pairs: int = 64) -> list:
    rows = []
    for n, m in YOUNG_CASES:
        pairs = [(ineq.random_function(s, f"ball:{n}"), ineq.random_function(s + 1000, f"ball:{n}"))
                 for s in range(seeds)]
        for kind in ("lorentz", "sqrt"):
            for N in OCTAVE_LADDER:
                h = ineq.DifferenceKernel(kind, N)
                for s, (f, g) in enumerate(pairs):
                    r = ineq.young_bilinear_check(f, g, h, m, n)
                    rows.append(ReportRecord("ineq", f"young_{kind}_n{n}_m{m}", N=N, lower=r.lhs,
                                             upper=r.rhs_scale, ratio=r.normalized, seed=s))
    for r in ineq.bilinear_W_ladder(OCTAVE_LADDER, seeds=range(seeds)):
        rows.append(ReportRecord("ineq", "w_ladder", N=r.context["N"], lower=r.lhs,
                                 upper=r.rhs_scale, ratio=r.normalized))
    hilbert = lambda x, y: 1 / (x + y)
    for s in range(hilbert_pairs):
        r = ineq.homogeneous_bilinear_check(hilbert, ineq.random_function(s, "[0,1]"),
                                            ineq.random_function(s + 1000, "[0,1]"), 2.0, depth=8)
        rows.append(ReportRecord("ineq", "hilbert", lower=r.lhs, upper=r.context["schur"],
                                 ratio=r.ratio, seed=s))
    for s in range(2):
        r = ineq.bilinear_V_check(ineq.random_function(s, "[-1,1]"), ineq.random_function(s + 1000, "[-1,1]"))
        rows.append(ReportRecord("ineq", "v_graded", lower=r.lhs, upper=r.context["schur"],
                                 ratio=r.context["folded_ratio"], seed=s))
    return rows


def schrodinger_battery() -> list:
    rows = []
    for n, a, b in SCHROD_CONFIGS:
        cfg = schrod.CounterexampleConfig(SCHROD_LADDER[0], n, LebesguePoint(a, b))
        for N in SCHROD_LADDER:
            c = cfg.at(N)
            norm = schrod.space_time_norm(c)
            rows.append(ReportRecord("schrod", "ratio_growth", f"n{n}", N, a, b, lower=norm,
                                     upper=schrod.forcing_norm(c), ratio=norm / schrod.forcing_norm(c)))
    for n in (1, 2, 3):
        cfg = schrod.CounterexampleConfig(SCHROD_LADDER[0], n, LebesguePoint(1.0, 0.0))
        for N in SCHROD_LADDER:
            c = cfg.at(N)
            scale = c.eta ** n * N ** (-(1 + n))
            low = min(float(np.abs(schrod.shell_profile(t, c).u).min()) for t in c.t_samples)
            rows.append(ReportRecord("schrod", "shell_min", f"n{n}", N, lower=low, ratio=low / scale))
        prof = schrod.shell_profile(2.5, cfg)
        for x, u in zip(prof.x, prof.u):
            rows.append(ReportRecord("schrod", "shell_profile_t2.5", f"n{n}", prof.N, x=float(x),
                                     lower=float(abs(u))))
    return rows


SUITES = {
    "phase": phase_battery,
    "kernels": kernels_battery,
    "bilinear": bilinear_battery,
    "schrodinger": schrodinger_battery,
}
