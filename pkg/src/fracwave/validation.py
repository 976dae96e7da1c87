"""Residual computations shared by the ``validate`` command and the test-suite.

Each function returns a residual (a float, or a small dict of floats); deciding
pass or fail against a tolerance is left to the caller.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from typing import Callable

import numpy as np

from fracwave.green import (
    green1d,
    green1d_unit,
    green3d_aniso,
    green3d_isotropic,
    green3d_neutral_aniso,
    green3d_unit,
    green_u23,
    identity_check,
)
from fracwave.kernels import peak_location, x_alpha, y_alpha, z_alpha
from fracwave.oracle import FieldGrid, energy_check, ifft_green
from fracwave.quadrature import gauss_legendre_panels
from fracwave.specfun import mittag_leffler
from fracwave.symbols import (
    FracParams,
    SphericalMeasure,
    dispersion,
    generating_v,
    generating_v_hessian,
    grad_q_hat,
    q_hat,
    stiffness_symbol,
)
from fracwave.wright import m_wright, m_wright_23

__all__ = [
    "CheckResult",
    "kernel_mass",
    "identity_residual",
    "oracle_residual",
    "closed_form_residuals",
    "alpha2_residuals",
    "scaling_residual",
    "anisotropy_residuals",
    "constitutive_residuals",
    "energy_residuals",
    "attenuation_slope",
    "figure_checks",
    "PAIRS",
]

PAIRS = ((1.2, 1.6), (1.5, 2.0), (1.3, 1.9))


@dataclass(frozen=True)
class CheckResult:
    name: str
    residual: float
    tolerance: float

    @property
    def passed(self) -> bool:
        return bool(np.isfinite(self.residual) and self.residual <= self.tolerance)

    def as_dict(self) -> dict:
        return {**asdict(self), "passed": self.passed}


def _series_tail(alpha, y0, extra=0.0, n_terms=40):
    """A sum_n U_n(-c) y0^{-p_n} / p_n (extra = 0) or / (p_n (p_n + extra)); p_n = alpha (n+1)."""
    c = math.cos(alpha * math.pi / 2)
    u_prev, u = 0.0, 1.0
    total = 0.0
    for n in range(n_terms):
        p = alpha * (n + 1)
        total += u * y0 ** (-p) / (p * (p + extra) if extra else p)
        u_prev, u = u, -2.0 * c * u - u_prev
    return math.sin(alpha * math.pi / 2) / math.pi * total


def kernel_mass(alpha, kind="X", kernel: Callable | None = None, lo=-80.0, hi=40.0) -> float:
    """int_R X_alpha (or Y_alpha) dy, in log y with the algebraic tail beyond e^hi added analytically."""
    fn = kernel or (x_alpha if kind == "X" else y_alpha)
    s, w = gauss_legendre_panels(np.linspace(lo, hi, int((hi - lo) / 0.25) + 1), 16)
    y = np.exp(s)
    body = float(np.sum(w * y * fn(alpha, y)))
    # X ~ A sum U_n y^{-p_n-1}, Y ~ A sum U_n y^{-p_n-1} / (p_n + 1)
    tail = _series_tail(alpha, math.exp(hi), extra=0.0 if kind == "X" else 1.0)
    return 2.0 * (body + tail)


def identity_residual(beta, alpha, which="G", kappa=None) -> float:
    kappa = np.linspace(0.0, 5.0, 101) if kappa is None else kappa
    return identity_check(beta, alpha, kappa, which)


def oracle_residual(beta, alpha, which="G", dim=1, n=65536, extent=400.0) -> float:
    """Max |green - ifft_green| on 0.1 <= |x| <= 4 at t = 1."""
    grid = FieldGrid.empty(n, extent)
    field = ifft_green(lambda k: -np.abs(k) ** alpha, beta, 1.0, grid, which,
                       tail=(alpha, 1.0), radial_lift=(dim == 3))
    x = grid.x
    sel = (x >= 0.1) & (x <= 4.0)
    p = FracParams(beta, alpha)
    ref = green1d(p, 1.0, x[sel], which) if dim == 1 else green3d_isotropic(p, 1.0, x[sel], which)
    return float(np.max(np.abs(field.values[sel] - ref)))


def closed_form_residuals() -> dict:
    z = np.linspace(0.05, 5.0, 100)
    zz = np.linspace(0.0, 5.0, 101)
    return {
        "m23_bessel_airy_vs_series": float(np.max(np.abs(m_wright_23(z) - m_wright(2.0 / 3.0, z)))),
        "m12_gaussian": float(np.max(np.abs(m_wright(0.5, zz) - np.exp(-zz ** 2 / 4) / math.sqrt(math.pi)))),
        "e1_exponential": float(np.max(np.abs(mittag_leffler(1.0, 1.0, -zz) - np.exp(-zz)))),
        "e2_cosine": float(np.max(np.abs(mittag_leffler(2.0, 1.0, -zz ** 2) - np.cos(zz)))),
    }


def alpha2_residuals(beta, x=None, limit_alpha=2.0 - 1e-6) -> dict:
    """alpha = 2 branch vs M_{beta/2}/2, and vs the Mellin quadrature at alpha -> 2."""
    x = np.linspace(0.1, 4.0, 14) if x is None else x
    g = beta / 2.0
    exact = m_wright(g, np.abs(x)) / 2.0
    branch = green1d(FracParams(beta, 2.0), 1.0, x, "G")
    limit = green1d_unit(g, limit_alpha, x, "G")
    return {"branch": float(np.max(np.abs(branch - exact))),
            "limit": float(np.max(np.abs(limit - exact)))}


def scaling_residual(params: FracParams, dim, which, t, x=None) -> float:
    """Relative mismatch of G(t, x) and t^{-d gamma} G(1, x / t^gamma) (extra t for H)."""
    x = np.linspace(0.1, 4.0, 9) if x is None else x
    g = params.gamma
    fn = green1d if dim == 1 else green3d_isotropic
    lhs = np.asarray(fn(params, t, x, which))
    rhs = np.asarray(fn(params, 1.0, x / t ** g, which)) * t ** (-dim * g)
    if which == "H":
        rhs = rhs * t
    return float(np.max(np.abs(lhs - rhs) / np.abs(rhs)))


def anisotropy_residuals(alpha=1.7, beta=1.4, rotation=None, seed=7) -> dict:
    """Uniform-measure anisotropic vs isotropic paths, and rotational equivariance."""
    from scipy.spatial.transform import Rotation

    rng = np.random.default_rng(seed)
    uni = SphericalMeasure.uniform(1.0)
    r = np.array([0.4, 1.0, 2.2])
    dirs = rng.normal(size=(3, 3))
    dirs /= np.linalg.norm(dirs, axis=1)[:, None]
    pts = r[:, None] * dirs
    neutral = green3d_neutral_aniso(uni, alpha, 1.0, pts)
    neutral_iso = green3d_isotropic(FracParams(alpha, alpha), 1.0, r)
    p = FracParams(beta, alpha)
    sub = green3d_aniso(uni, p, 1.0, pts[:2])
    sub_iso = green3d_isotropic(p, 1.0, r[:2])
    rot = Rotation.random(random_state=seed).as_matrix() if rotation is None else rotation
    atoms = rng.normal(size=(3, 3))
    atoms /= np.linalg.norm(atoms, axis=1)[:, None]
    mu = SphericalMeasure(atoms, np.array([0.4, 0.25, 0.15]), 0.2)
    mu_rot = SphericalMeasure(atoms @ rot.T, mu.weights, mu.uniform_mass)
    a = green3d_neutral_aniso(mu, alpha, 1.0, pts)
    b = green3d_neutral_aniso(mu_rot, alpha, 1.0, pts @ rot.T)
    return {
        "uniform_neutral": float(np.max(np.abs(neutral - neutral_iso) / np.abs(neutral_iso))),
        "uniform_subordinated": float(np.max(np.abs(sub - sub_iso) / np.abs(sub_iso))),
        "equivariance": float(np.max(np.abs(a - b) / np.abs(a))),
    }


def wave_alpha2_residual(weights=(0.5, 0.3, 0.2), epsilon=0.4, n=128, extent=8.0, seed=3) -> float:
    """Three orthonormal atoms, alpha = beta = 2: mollified closed form vs 3D FFT (relative to peak)."""
    from scipy.spatial.transform import Rotation

    from fracwave.symbols import orthonormal_atoms

    mu = orthonormal_atoms(np.asarray(weights, dtype=float),
                           Rotation.random(random_state=seed).as_matrix())
    grid = FieldGrid.empty(n, extent, 3)
    worst = 0.0
    for which in ("G", "H"):
        field = ifft_green(lambda k: q_hat(mu, 2.0, k), 2.0, 1.0, grid, which,
                           mollifier=lambda k: np.exp(0.5 * epsilon ** 2 * q_hat(mu, 2.0, k)))
        x = grid.x
        pts = np.stack(np.meshgrid(x, x, x, indexing="ij"), axis=-1)
        closed = green3d_neutral_aniso(mu, 2.0, 1.0, pts, which, epsilon=epsilon)
        worst = max(worst, float(np.max(np.abs(field.values - closed)) / np.max(np.abs(closed))))
    return worst


def _random_measure(rng):
    m = int(rng.integers(1, 5))
    d = rng.normal(size=(m, 3))
    d /= np.linalg.norm(d, axis=1)[:, None]
    w = rng.uniform(0.1, 1.0, size=m)
    u = float(rng.uniform(0.0, 1.0)) if rng.uniform() < 0.5 else 0.0
    total = w.sum() + u
    return SphericalMeasure(d, w / total, u / total)


def _fd_gradient(fn, k, rel_step=1e-4):
    """Fourth-order central differences, independent of the analytic derivatives."""
    h = rel_step * np.linalg.norm(k)
    g = np.empty(3)
    for i in range(3):
        e = np.zeros(3)
        e[i] = h
        g[i] = (8 * (fn(k + e) - fn(k - e)) - (fn(k + 2 * e) - fn(k - 2 * e))) / (12 * h)
    return g


def constitutive_residuals(draws=100, seed=11) -> dict:
    """Max relative residuals of the symbol identities over random (measure, alpha, k)."""
    rng = np.random.default_rng(seed)
    worst = {"contraction": 0.0, "euler_q": 0.0, "euler_v": 0.0, "hessian_symmetry": 0.0,
             "hessian_nsd": 0.0}
    for _ in range(draws):
        mu = _random_measure(rng)
        alpha = float(rng.uniform(1.05, 2.0))
        k = rng.normal(size=3) * rng.uniform(0.2, 3.0)
        q = q_hat(mu, alpha, k)
        scale_q = abs(q)
        c = stiffness_symbol(mu, alpha, k)
        worst["contraction"] = max(worst["contraction"], abs(-k @ c @ k - q) / scale_q)
        worst["euler_q"] = max(worst["euler_q"], abs(k @ grad_q_hat(mu, alpha, k) - alpha * q) / scale_q)
        v = generating_v(mu, alpha, k)
        h = generating_v_hessian(mu, alpha, k)
        grad_v = _fd_gradient(lambda kk: generating_v(mu, alpha, kk), k)
        worst["euler_v"] = max(worst["euler_v"], abs(k @ grad_v - (alpha + 2) * v) / abs(v))
        hn = np.max(np.abs(h))
        worst["hessian_symmetry"] = max(worst["hessian_symmetry"], float(np.max(np.abs(h - h.T))) / hn)
        worst["hessian_nsd"] = max(worst["hessian_nsd"], max(0.0, float(np.max(np.linalg.eigvalsh(h)))) / hn)
    return worst


def energy_residuals(steps=400, n=4096, extent=64.0, horizon=2.0) -> dict:
    q = lambda a: (lambda k: -np.abs(k) ** a)  # noqa: E731
    grid = FieldGrid.empty(n, extent)
    _, d22 = energy_check(FracParams(2.0, 2.0), q(2.0), grid, horizon, steps)
    _, d215 = energy_check(FracParams(2.0, 2.0), q(1.5), grid, horizon, steps)
    series, d15 = energy_check(FracParams(1.5, 1.5), q(1.5), grid, horizon, steps)
    return {"drift_beta2_alpha2": d22, "drift_beta2_alpha15": d215, "drift_beta15": d15,
            "min_stored_beta15": float(series.stored.min())}


def attenuation_slope(params: FracParams, omega=None) -> float:
    """Least-squares slope of log(attenuation) vs log(omega); 0 when there is no attenuation."""
    omega = np.logspace(2, 6, 41) if omega is None else np.asarray(omega, dtype=float)
    att, _ = dispersion(params, omega)
    if np.all(att <= 1e-300):
        return 0.0
    return float(np.polyfit(np.log(omega), np.log(att), 1)[0])


def figure_checks() -> dict:
    """Shape facts for the kernel and Green-function figures plus the two-path consistency."""
    y = np.linspace(0.0, 5.0, 501)
    z19 = z_alpha(1.9, y)
    z10 = z_alpha(1.0, y)
    zz = np.linspace(0.0, 5.0, 501)
    m23 = m_wright(2.0 / 3.0, zz)
    x = np.linspace(0.05, 4.0, 80)
    out = {
        "z19_sign_changes": int(np.sum(np.diff(np.sign(z19)) != 0)),
        "z10_min": float(z10.min()),
        "m23_argmax": float(zz[np.argmax(m23)]),
    }
    peaks, g3_min, path = {}, {}, 0.0
    for alpha in (1.5, 1.9):
        g1 = green1d_unit(2.0 / 3.0, alpha, x)
        g3 = green3d_unit(2.0 / 3.0, alpha, x)
        peaks[alpha] = float(x[np.argmax(g1)])
        g3_min[alpha] = float(g3.min())
        path = max(path, float(np.max(np.abs(g1 - green_u23(alpha, x)))))
        grid = FieldGrid.empty(65536, 400.0)
        beta = 2.0 / 3.0 * alpha
        lifted = ifft_green(lambda k: -np.abs(k) ** alpha, beta, 1.0, grid, "G",
                            tail=(alpha, 1.0), radial_lift=True)
        xs = grid.x
        sel = (xs >= 0.05) & (xs <= 4.0)
        ref = green3d_unit(2.0 / 3.0, alpha, xs[sel])
        path = max(path, float(np.max(np.abs(lifted.values[sel] - ref))))
    out.update({"g1_peak_15": peaks[1.5], "g1_peak_19": peaks[1.9],
                "g3_min_15": g3_min[1.5], "g3_min_19": g3_min[1.9], "two_path": path,
                "peak_location_19": peak_location(1.9)})
    return out
