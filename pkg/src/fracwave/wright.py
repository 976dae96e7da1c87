"""Wright functions and the Mainardi functions M_gamma, N_gamma.

W_{lam,mu}(z) = sum_n z^n / (n! Gamma(lam n + mu)),   lam > -1.

For negative order lam = -gamma the series suffers cancellation at large
negative argument; there W is evaluated from the Hankel integral

    W_{-gamma,mu}(-x) = (1/2 pi i) int_Ha exp(s - x s^gamma) s^{-mu} ds

on a Talbot contour s(theta) = r (theta cot theta + i theta) whose radius r
sits at the real saddle point of s - x s^gamma.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from fracwave.quadrature import gauss_legendre_panels
from fracwave.specfun import (
    ConvergenceError,
    Precision,
    _log_abs_rgamma,
    airy_ai,
    airy_ai_prime,
    bessel_k_scaled,
)

__all__ = [
    "WrightParams",
    "GammaIndex",
    "wright_w",
    "wright_series",
    "wright_contour",
    "m_wright",
    "n_wright",
    "m_wright_prime",
    "n_wright_prime",
    "m_wright_cutoff",
    "m_wright_23",
    "n_wright_23",
    "f23",
]

CONTOUR_CROSSOVER = 3.0
CONTOUR_NODES = 400
WRIGHT_PRECISION = Precision(max_terms=20000)
M23_SERIES_CUT = 0.5


@dataclass(frozen=True)
class WrightParams:
    """Parameters (lam, mu) of W_{lam,mu}; ``lam`` stands for lambda."""

    lam: float
    mu: float

    def __post_init__(self):
        if not self.lam > -1:
            raise ValueError(f"Wright order must exceed -1, got {self.lam}")


@dataclass(frozen=True)
class GammaIndex:
    """The ratio gamma = beta / alpha, restricted to (0, 1)."""

    gamma: float

    def __post_init__(self):
        if not 0 < self.gamma < 1:
            raise ValueError(f"gamma must lie in (0, 1), got {self.gamma}")


def _gamma_value(gamma) -> float:
    g = gamma.gamma if isinstance(gamma, GammaIndex) else float(gamma)
    GammaIndex(g)
    return g


def _log_rgamma_bound(x):
    """Upper bound of log|1/Gamma(x)|, blind to the zeros of 1/Gamma.

    Below 1 the reflection formula gives |1/Gamma(x)| <= Gamma(1 - x) / pi,
    which also stays sane for arguments a rounding error away from a pole.
    """
    if x >= 1:
        return -math.lgamma(x)
    return math.lgamma(1.0 - x) - math.log(math.pi)


def _wrap(z, out):
    return float(out[0]) if np.ndim(z) == 0 else out.reshape(np.shape(z))


# --------------------------------------------------------------------------
# Series and contour
# --------------------------------------------------------------------------

def wright_series(lam, mu, z, precision: Precision = WRIGHT_PRECISION):
    """Power series of W_{lam,mu}(z); terms at poles of Gamma contribute 0."""
    z1 = np.atleast_1d(np.asarray(z, dtype=float)).ravel()
    absz = np.abs(z1)
    zmax = float(np.max(absz)) if z1.size else 0.0
    logz = np.log(np.where(absz > 0, absz, 1.0))
    sgn = np.sign(z1)
    lr0, s0 = _log_abs_rgamma(mu)
    total = np.full_like(z1, s0 * math.exp(lr0) if np.isfinite(lr0) else 0.0)
    if zmax == 0.0:
        return _wrap(z, total)
    log_zmax = math.log(zmax)
    peak = prev = -np.inf
    log_eps = math.log(precision.rel_tol * 1e-3)
    for n in range(1, precision.max_terms):
        lf = math.lgamma(n + 1.0)
        lr, s = _log_abs_rgamma(lam * n + mu)
        if np.isfinite(lr):
            total = total + np.where(absz > 0, s * sgn ** n * np.exp(n * logz - lf + lr), 0.0)
        bound = n * log_zmax - lf + _log_rgamma_bound(lam * n + mu)
        if n > 2 and bound < peak + log_eps and bound < prev:
            return _wrap(z, total)
        peak = max(peak, bound)
        prev = bound
    raise ConvergenceError(f"Wright series did not converge in {precision.max_terms} terms")


def wright_contour(gamma, mu, x, nodes: int = CONTOUR_NODES):
    """W_{-gamma,mu}(-x) for 0 < gamma < 1 and x > 0 by Talbot-contour quadrature.

    Midpoint rule in theta on (0, pi); the integrand is conjugate-symmetric so
    only the upper half of the contour is sampled. As gamma -> 1 the integrand
    decays ever more slowly along the contour, so the node count grows like
    1 / (1 - gamma).
    """
    nodes = max(nodes, int(math.ceil(100.0 / (1.0 - gamma))))
    x1 = np.atleast_1d(np.asarray(x, dtype=float)).ravel()
    if np.any(x1 <= 0):
        raise ValueError("wright_contour needs x > 0")
    r = np.maximum((x1 * gamma) ** (1.0 / (1.0 - gamma)), 1.0)[:, None]
    th = (np.arange(nodes) + 0.5) * (math.pi / nodes)
    cot = np.cos(th) / np.sin(th)
    s = r * (th * cot + 1j * th)
    ds = r * (cot - th / np.sin(th) ** 2 + 1j)
    xx = x1[:, None]
    with np.errstate(under="ignore"):
        f = np.exp(s - xx * s ** gamma) * s ** (-mu) * ds
    return _wrap(x, np.sum(f.imag, axis=1) / nodes)


def _series_limit(lam, mu) -> float:
    """Largest |z| <= 3 at which no series term exceeds ~1 in magnitude.

    Past that point cancellation costs more digits than the contour loses.
    """
    n = np.arange(1, 20000)
    lf = np.array([math.lgamma(k + 1.0) for k in n])
    lrb = np.array([_log_rgamma_bound(lam * k + mu) for k in n])
    return float(min(CONTOUR_CROSSOVER, math.exp(np.min((lf - lrb) / n))))


def wright_w(params: WrightParams, z, precision: Precision = WRIGHT_PRECISION,
             nodes: int = CONTOUR_NODES):
    """W_{lam,mu}(z) for real z.

    The series is used throughout except for ``-1 < lam < 0`` and large
    negative z, where the Hankel contour takes over.
    """
    lam, mu = params.lam, params.mu
    z1 = np.atleast_1d(np.asarray(z, dtype=float)).ravel()
    out = np.empty_like(z1)
    far = np.zeros(z1.shape, dtype=bool)
    if lam < 0:
        far = z1 < -_series_limit(lam, mu)
    if np.any(~far):
        out[~far] = np.atleast_1d(wright_series(lam, mu, z1[~far], precision))
    if np.any(far):
        out[far] = np.atleast_1d(wright_contour(-lam, mu, -z1[far], nodes))
    return _wrap(z, out)


# --------------------------------------------------------------------------
# Mainardi functions
# --------------------------------------------------------------------------

def _mainardi(gamma, mu, z, precision, nodes):
    g = _gamma_value(gamma)
    z = np.asarray(z, dtype=float)
    if np.any(z < 0):
        raise ValueError("Mainardi functions are evaluated for z >= 0")
    return wright_w(WrightParams(-g, mu), -z, precision, nodes)


def m_wright(gamma, z, precision: Precision = WRIGHT_PRECISION, nodes: int = CONTOUR_NODES):
    """M_gamma(z) = W_{-gamma,1-gamma}(-z), a probability density on z >= 0."""
    g = _gamma_value(gamma)
    return _mainardi(g, 1.0 - g, z, precision, nodes)


def n_wright(gamma, z, precision: Precision = WRIGHT_PRECISION, nodes: int = CONTOUR_NODES):
    """N_gamma(z) = W_{-gamma,2-gamma}(-z)."""
    g = _gamma_value(gamma)
    return _mainardi(g, 2.0 - g, z, precision, nodes)


def m_wright_prime(gamma, z, precision: Precision = WRIGHT_PRECISION,
                   nodes: int = CONTOUR_NODES):
    """dM_gamma/dz = -W_{-gamma,1-2gamma}(-z)."""
    g = _gamma_value(gamma)
    return -_mainardi(g, 1.0 - 2.0 * g, z, precision, nodes)


def n_wright_prime(gamma, z, precision: Precision = WRIGHT_PRECISION,
                   nodes: int = CONTOUR_NODES):
    """dN_gamma/dz = -W_{-gamma,2-2gamma}(-z)."""
    g = _gamma_value(gamma)
    return -_mainardi(g, 2.0 - 2.0 * g, z, precision, nodes)


def m_wright_cutoff(gamma, tail: float = 1e-16) -> float:
    """Argument beyond which M_gamma and N_gamma are below ~``tail``.

    From the saddle value exp(-s* (1 - gamma) / gamma) of the Hankel integral,
    with s* = (z gamma)^{1/(1-gamma)}.
    """
    g = _gamma_value(gamma)
    big = -math.log(tail) + 5.0
    sstar = big * g / (1.0 - g)
    return sstar ** (1.0 - g) / g


# --------------------------------------------------------------------------
# gamma = 2/3 closed forms
# --------------------------------------------------------------------------

_C3 = 3.0 ** (1.0 / 3.0)


def m_wright_23(z):
    """M_{2/3}(z) from its Bessel-K form, with the Airy form near z = 0.

    M_{2/3}(z) = z^2 / (3^{3/2} pi) [K_{1/3}(y) + K_{2/3}(y)] e^{-y},  y = 2 z^3 / 27.
    """
    z1 = np.atleast_1d(np.asarray(z, dtype=float)).ravel()
    if np.any(z1 < 0):
        raise ValueError("m_wright_23 needs z >= 0")
    out = np.empty_like(z1)
    small = z1 <= M23_SERIES_CUT
    zs = z1[small]
    if zs.size:
        a = zs ** 2 / _C3 ** 4
        out[small] = (zs * airy_ai(a) / _C3 - _C3 * airy_ai_prime(a)) * np.exp(-2.0 * zs ** 3 / 27.0)
    zb = z1[~small]
    if zb.size:
        y = 2.0 * zb ** 3 / 27.0
        ks = bessel_k_scaled(1.0 / 3.0, y) + bessel_k_scaled(2.0 / 3.0, y)
        out[~small] = zb ** 2 / (3.0 ** 1.5 * math.pi) * ks * np.exp(-2.0 * y)
    return _wrap(z, out)


def _n23_integral(z, panel: float = 0.5, nodes: int = 16, reach: float = 25.0):
    """N_{2/3}(z) for z > 0 from its Bessel-K integral.

    N_gamma(z) = (1/gamma) z^{1/gamma - 1} int_z^inf xi^{-1/gamma} M_gamma(xi) d xi
    becomes, with y = 2 xi^3 / 27,
    N_{2/3}(z) = sqrt(2 z) / (4 pi) int_Y^inf y^{-1/2} [K_{1/3} + K_{2/3}](y) e^{-y} dy.
    Integrated in log y; panels shrink as 1/Y so the e^{-2y} decay stays resolved.
    """
    Y = 2.0 * z ** 3 / 27.0
    lo, hi = math.log(Y), math.log(Y + reach)
    h = panel / max(1.0, Y)
    edges = np.linspace(lo, hi, max(2, int(math.ceil((hi - lo) / h)) + 1))
    s, w = gauss_legendre_panels(edges, nodes)
    y = np.exp(s)
    ks = bessel_k_scaled(1.0 / 3.0, y) + bessel_k_scaled(2.0 / 3.0, y)
    # the y-weights carry exp(-2Y) analytically to avoid underflow at large z
    val = np.sum(w * np.sqrt(y) * ks * np.exp(-2.0 * (y - Y)))
    return math.sqrt(2.0 * z) / (4.0 * math.pi) * val * math.exp(-2.0 * Y)


def n_wright_23(z):
    """N_{2/3}(z): series near 0, Bessel-K integral beyond."""
    z1 = np.atleast_1d(np.asarray(z, dtype=float)).ravel()
    if np.any(z1 < 0):
        raise ValueError("n_wright_23 needs z >= 0")
    out = np.empty_like(z1)
    small = z1 <= M23_SERIES_CUT
    if np.any(small):
        out[small] = np.atleast_1d(wright_series(-2.0 / 3.0, 4.0 / 3.0, -z1[small]))
    for i in np.flatnonzero(~small):
        out[i] = _n23_integral(float(z1[i]))
    return _wrap(z, out)


def f23(t, lambda1, lambda2):
    """Airy closed form of f_2^(3)(t, lambda1, lambda2) for t > 0, lambda_i >= 0.

    f_2^(3) = (1/2 pi i) int_Br s^{-2/3} exp(s t - lambda1 s^{2/3} - lambda2 s^{1/3}) ds.
    """
    t = np.asarray(t, dtype=float)
    l1 = np.asarray(lambda1, dtype=float)
    l2 = np.asarray(lambda2, dtype=float)
    if np.any(t <= 0):
        raise ValueError("f23 needs t > 0")
    arg = (3.0 * t) ** (-1.0 / 3.0) * (l2 + l1 ** 2 / (3.0 * t))
    damp = np.exp(-(l1 / (3.0 * t)) * (l2 + 2.0 * l1 ** 2 / (9.0 * t)))
    res = 3.0 ** (2.0 / 3.0) / np.cbrt(t) * airy_ai(arg) * damp
    return float(res) if np.ndim(res) == 0 else res
