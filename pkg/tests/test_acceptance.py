"""Acceptance criteria 1-11, each at its stated tolerance.

Every test records a one-line PASS/FAIL verdict with the measured residual;
the lines are printed in the pytest terminal summary.
"""

import time

import numpy as np
import pytest

from conftest import ACCEPTANCE_LINES
from fracwave import validation as v
from fracwave.cli import main
from fracwave.symbols import FracParams


def record(number, title, checks):
    """checks: list of (label, value, bound, ok). Stores the verdict line and asserts."""
    ok = all(c[3] for c in checks)
    detail = "; ".join(f"{label} {value:.3g} (bound {bound:g})" for label, value, bound, _ in checks)
    ACCEPTANCE_LINES[number] = f"[{'PASS' if ok else 'FAIL'}] criterion {number:2d} {title}: {detail}"
    bad = [c for c in checks if not c[3]]
    assert not bad, f"criterion {number} failed: {bad}"


def below(label, value, bound):
    return (label, float(value), bound, float(value) <= bound)


def test_01_normalization():
    t0 = time.perf_counter()
    worst = 0.0
    for a in (0.5, 1.0, 1.2, 1.5, 1.9):
        for kind in ("X", "Y"):
            worst = max(worst, abs(v.kernel_mass(a, kind) - 1.0))
    elapsed = time.perf_counter() - t0
    record(1, "probability normalization", [below("max |mass - 1|", worst, 1e-7),
                                            below("seconds", elapsed, 5.0)])


def test_02_subordination_identity():
    g = max(v.identity_residual(b, a, "G") for b, a in v.PAIRS)
    h = max(v.identity_residual(b, a, "H") for b, a in v.PAIRS)
    record(2, "subordination identity", [below("E_beta residual", g, 1e-6),
                                         below("E_beta,2 residual", h, 1e-5)])


def test_03_oracle_equivalence():
    t0 = time.perf_counter()
    worst = {1: 0.0, 3: 0.0}
    for b, a in v.PAIRS:
        for dim in (1, 3):
            for which in ("G", "H"):
                worst[dim] = max(worst[dim], v.oracle_residual(b, a, which, dim))
    elapsed = time.perf_counter() - t0
    record(3, "FFT oracle equivalence", [below("1D max abs", worst[1], 1e-4),
                                         below("3D max abs", worst[3], 1e-4),
                                         below("seconds", elapsed, 60.0)])


def test_04_closed_forms():
    res = v.closed_form_residuals()
    record(4, "closed-form crosswalks", [
        below("M_2/3 Bessel vs series", res["m23_bessel_airy_vs_series"], 1e-8),
        below("M_1/2 Gaussian", res["m12_gaussian"], 1e-10),
        below("E_1 exponential", res["e1_exponential"], 1e-12),
        below("E_2 cosine", res["e2_cosine"], 1e-12)])


def test_05_alpha_two_reduction():
    branch = limit = 0.0
    for beta in (1.2, 1.5, 1.8):
        res = v.alpha2_residuals(beta)
        branch, limit = max(branch, res["branch"]), max(limit, res["limit"])
    record(5, "alpha = 2 reduction", [below("analytic branch", branch, 1e-8),
                                      below("alpha -> 2 limit", limit, 1e-3)])


def test_06_scaling_law():
    worst = 0.0
    for b, a in v.PAIRS:
        p = FracParams(b, a)
        for dim in (1, 3):
            for which in ("G", "H"):
                for t in (0.5, 2.0, 5.0):
                    worst = max(worst, v.scaling_residual(p, dim, which, t))
    record(6, "scaling law", [below("max relative residual", worst, 1e-8)])


def test_07_anisotropy():
    res = v.anisotropy_residuals()
    wave = v.wave_alpha2_residual()
    record(7, "anisotropy sanity", [
        below("uniform neutral vs isotropic", res["uniform_neutral"], 1e-4),
        below("uniform subordinated vs isotropic", res["uniform_subordinated"], 1e-4),
        below("rotational equivariance", res["equivariance"], 1e-10),
        below("alpha = 2 three atoms vs 3D FFT", wave, 1e-3)])


def test_08_constitutive_identities():
    res = v.constitutive_residuals(draws=100)
    record(8, "constitutive identities", [below(name, val, 1e-9) for name, val in res.items()])


def test_09_energy():
    t0 = time.perf_counter()
    res = v.energy_residuals(steps=400, n=4096, horizon=2.0)
    elapsed = time.perf_counter() - t0
    record(9, "energy balance", [
        below("beta = 2 drift", res["drift_beta2_alpha2"], 1e-10),
        below("beta = 2, Q = -|k|^1.5 drift", res["drift_beta2_alpha15"], 1e-10),
        below("beta = 1.5 drift", res["drift_beta15"], 1e-3),
        below("beta = 1.5 -min U", max(0.0, -res["min_stored_beta15"]), 0.0),
        below("seconds", elapsed, 120.0)])


def _cli_csv(tmp_path, name, argv):
    out = tmp_path / f"{name}.csv"
    assert main(argv + ["--out", str(out)]) == 0
    return np.loadtxt(out, delimiter=",", skiprows=1)


def test_10_figures(tmp_path):
    z19 = _cli_csv(tmp_path, "z19", ["kernel", "--fn", "z_alpha", "--alpha", "1.9", "--grid", "0:5:501"])
    z10 = _cli_csv(tmp_path, "z10", ["kernel", "--fn", "z_alpha", "--alpha", "1.0", "--grid", "0:5:501"])
    m23 = _cli_csv(tmp_path, "m23", ["kernel", "--fn", "m_wright", "--gamma", str(2.0 / 3.0),
                                     "--grid", "0:5:501"])
    g1 = {a: _cli_csv(tmp_path, f"g1_{a}", ["green", "--dim", "1", "--beta", str(2.0 * a / 3.0),
                                             "--alpha", str(a), "--grid", "0.05:4:80"]) for a in (1.5, 1.9)}
    g3 = {a: _cli_csv(tmp_path, f"g3_{a}", ["green", "--dim", "3", "--beta", str(2.0 * a / 3.0),
                                             "--alpha", str(a), "--grid", "0.05:4:80"]) for a in (1.5, 1.9)}
    sign_changes = int(np.count_nonzero(np.diff(np.sign(z19[:, 1])) != 0))
    peak15 = g1[1.5][np.argmax(g1[1.5][:, 1]), 0]
    peak19 = g1[1.9][np.argmax(g1[1.9][:, 1]), 0]
    two_path = v.figure_checks()["two_path"]
    record(10, "figure regeneration", [
        below("|Z_1.9 sign changes - 1|", abs(sign_changes - 1), 0),
        below("-min Z_1", max(0.0, -z10[:, 1].min()), 1e-15),
        ("argmax M_2/3 (> 0)", float(m23[np.argmax(m23[:, 1]), 0]), 0.0, m23[np.argmax(m23[:, 1]), 0] > 0),
        ("G1 peak 1.5 < peak 1.9", float(peak15 - peak19), 0.0, peak15 < peak19),
        ("min G3 alpha 1.5 (>= 0)", float(g3[1.5][:, 1].min()), 0.0, g3[1.5][:, 1].min() >= 0),
        ("min G3 alpha 1.9 (< 0)", float(g3[1.9][:, 1].min()), 0.0, g3[1.9][:, 1].min() < 0),
        below("two-path max abs", two_path, 1e-5)])


def test_11_dispersion_slope():
    p = FracParams(1.5, 1.9)
    slope = v.attenuation_slope(p, np.logspace(2, 6, 41))
    record(11, "attenuation slope", [below("|slope / gamma - 1|", abs(slope / p.gamma - 1.0), 1e-2)])


if __name__ == "__main__":
    raise SystemExit(pytest.main([__file__, "-v"]))
