"""Acceptance criteria, one test and one PASS/FAIL line each.

The full run takes roughly 20 minutes on one core; select it alone with
``pytest tests/test_acceptance.py -s`` to watch the lines as they come.
"""

import numpy as np
import pytest

from oscillorm.opnorm import (
    DEFAULT_LADDER,
    build_cartesian_operator,
    build_operator,
    construction_ratios,
    fit_exponent,
    norm_2_2,
    norm_lower_bound,
)
from oscillorm.report import ReportRecord, summarize
from oscillorm.suites import bilinear_battery, kernels_battery, phase_battery, schrodinger_battery
from oscillorm.theory import LebesguePoint, PhaseFamily

FAMILIES = [PhaseFamily(j, k, n) for n in (1, 2, 3) for j in (1, 2) for k in (1, 2)]
POINTS = [LebesguePoint(a, b) for a, b in ((0, 1), (0, 0.5), (0.25, 0.25), (0.5, 0.5), (0.75, 0.5), (1, 1))]

SANDWICH_TOL = 0.07
ENERGY_TOL = 0.05
CONSTRUCTION_TOL = 0.05
CARTESIAN_TOL = 0.01


@pytest.fixture(scope="module")
def ladders():
    """Norm sandwich rows and 2 -> 2 norms for every family on the default ladder."""
    rows, norms = [], {}
    for fam in FAMILIES:
        for N in DEFAULT_LADDER:
            op = build_operator(fam, N, points_per_period=8)
            c22 = norm_2_2(op, tol=1e-9)
            norms[fam, N] = c22
            for p in POINTS:
                est = norm_lower_bound(op, p, c22=c22)
                rows.append(ReportRecord("opnorm", "norm_bounds", fam.tag, N, p.a, p.b, lower=est.lower,
                                         upper=est.upper, ratio=est.lower / est.upper, seed=0))
    return rows, norms


@pytest.fixture(scope="module")
def phase_checks():
    return {c["name"]: c for c in summarize(phase_battery())["checks"]}


def _failures(checks, prefix):
    chosen = [c for c in checks if c["name"].startswith(prefix)]
    assert chosen, f"no checks named {prefix}*"
    return chosen, [c for c in chosen if not c["passed"]]


def test_criterion_1_slope_sandwich(ladders, acceptance_line):
    rows, _ = ladders
    cells = summarize(rows, SANDWICH_TOL)["cells"]
    bad = [c for c in cells if not c["passed"]]
    detail = f"{len(cells) - len(bad)}/{len(cells)} (family, point) cells within {SANDWICH_TOL}"
    if bad:
        detail += "; off: " + ", ".join(
            f"{c['family']}@({c['a']},{c['b']}) C={c['C']:.3f} lower={c['slope_lower']:.3f} "
            f"upper={c['slope_upper']:.3f}" for c in bad)
    acceptance_line(1, not bad, detail)
    assert not bad, detail


def test_criterion_2_energy_slope(ladders, acceptance_line):
    _, norms = ladders
    off = []
    for fam in FAMILIES:
        target = -0.25 if (fam.n, fam.j) == (1, 2) else -1 / (2 * fam.k)
        slope = fit_exponent([(N, norms[fam, N]) for N in DEFAULT_LADDER]).slope
        if abs(slope - target) > ENERGY_TOL:
            off.append(f"{fam.tag} slope={slope:.3f} target={target}")
    detail = f"{len(FAMILIES) - len(off)}/{len(FAMILIES)} families within {ENERGY_TOL}"
    if off:
        detail += "; off: " + ", ".join(off)
    acceptance_line(2, not off, detail)
    assert not off, detail


def test_criterion_3_constructions(acceptance_line):
    points = POINTS
    off, total = [], 0
    for fam in FAMILIES:
        ratios = {}
        for N in DEFAULT_LADDER:
            for kind, vals in construction_ratios(fam, N, points).items():
                ratios.setdefault(kind, []).append(vals)
        for kind, per_N in ratios.items():
            per_N = np.asarray(per_N)
            for i, p in enumerate(points):
                target = {"focusing": -(fam.n / fam.j) * (1 - p.a),
                          "constant": -p.b / fam.k,
                          "oscillatory": -0.5}[kind]
                slope = fit_exponent(zip(DEFAULT_LADDER, per_N[:, i])).slope
                total += 1
                if abs(slope - target) > CONSTRUCTION_TOL:
                    off.append(f"{kind} {fam.tag}@({p.a},{p.b}) slope={slope:.3f} target={target:.3f}")
    detail = f"{total - len(off)}/{total} construction slopes within {CONSTRUCTION_TOL}"
    if off:
        detail += "; off: " + ", ".join(off)
    acceptance_line(3, not off, detail)
    assert not off, detail


def test_criterion_4_gaussian_and_fresnel(phase_checks, acceptance_line):
    checks = list(phase_checks.values())
    gauss, bad_g = _failures(checks, "gaussian_")
    (fresnel,), bad_f = _failures(checks, "fresnel")
    detail = ("gaussian growth " + ", ".join(f"{c['name']}={c['value']:.3f}" for c in gauss)
              + f" (limit {gauss[0]['limit']}); fresnel slope {fresnel['value']:.4f} (-0.5 +- 0.03)")
    ok = not bad_g and not bad_f
    acceptance_line(4, ok, detail)
    assert ok, detail


def test_criterion_5_stationary_remainder(phase_checks, acceptance_line):
    chosen = [phase_checks["remainder_duhamel_n1"], phase_checks["remainder_quadratic"]]
    ok = all(c["passed"] for c in chosen)
    detail = ", ".join(f"{c['name']} spread={c['value']:.3f}" for c in chosen) + " (limit 5)"
    acceptance_line(5, ok, detail)
    assert ok, detail


def test_criterion_6_kernel_and_bilinear_drift(acceptance_line):
    checks = summarize(kernels_battery() + bilinear_battery())["checks"]
    parts, bad = [], []
    for prefix in ("kernel_bound_", "young_", "w_ladder", "hilbert"):
        chosen, failed = _failures(checks, prefix)
        bad += failed
        parts.append(f"{prefix.rstrip('_')} max={max(c['value'] for c in chosen):.3f}")
    (hilbert,) = [c for c in checks if c["name"] == "hilbert"]
    detail = "; ".join(parts) + f" (drift < 2, hilbert <= pi+0.05 over {hilbert['pairs']} pairs)"
    if bad:
        detail += "; off: " + ", ".join(c["name"] for c in bad)
    acceptance_line(6, not bad, detail)
    assert not bad, detail


def test_criterion_7_radial_vs_cartesian(acceptance_line):
    worst, off = 0.0, []
    for j in (1, 2):
        for k in (1, 2):
            fam = PhaseFamily(j, k, 2)
            for N in (16.0, 32.0, 64.0):
                radial = norm_2_2(build_operator(fam, N), tol=1e-9)
                cart = norm_2_2(build_cartesian_operator(fam, N), tol=1e-9)
                gap = abs(radial / cart - 1)
                worst = max(worst, gap)
                if gap > CARTESIAN_TOL:
                    off.append(f"{fam.tag} N={N:g} gap={gap:.2e}")
    detail = f"largest relative gap {worst:.2e} (limit {CARTESIAN_TOL})"
    if off:
        detail += "; off: " + ", ".join(off)
    acceptance_line(7, not off, detail)
    assert not off, detail


def test_criterion_8_schrodinger_counterexample(acceptance_line):
    checks = summarize(schrodinger_battery())["checks"]
    growth, bad_g = _failures(checks, "ratio_growth")
    shell, bad_s = _failures(checks, "shell_min")
    targets = [c["target"] for c in growth]
    spread = any(t > 0 for t in targets) and any(t < 0 for t in targets) and len(growth) >= 4
    ok = spread and not bad_g and not bad_s
    detail = (", ".join(f"{c['name'].removeprefix('ratio_growth_')} slope={c['value']:.3f} "
                        f"target={c['target']:.3f}" for c in growth)
              + "; shell worst/c " + ", ".join(f"{c['name'][-2:]}={c['value']:.2f}" for c in shell))
    acceptance_line(8, ok, detail)
    assert ok, detail
