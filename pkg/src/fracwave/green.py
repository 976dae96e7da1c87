"""Fundamental solutions G (initial displacement) and H (initial velocity).

In Fourier space the solutions of rho D^beta u = Q u are

    G(t, k) = E_beta(Q(k) t^beta / rho),   H(t, k) = t E_{beta,2}(Q(k) t^beta / rho).

With gamma = beta / alpha, the Mittag-Leffler subordination identities

    E_beta(-kappa^alpha)     = int_0^inf M_gamma(xi) E_alpha(-(kappa xi)^alpha) d xi,
    E_{beta,2}(-kappa^alpha) = int_0^inf N_gamma(xi) E_alpha(-(kappa xi)^alpha) d xi

turn every solution into a Mellin superposition of the neutral (beta = alpha)
solution: in d dimensions  G(1, x) = int M_gamma(xi) G_neutral(1, x / xi) xi^{-d} d xi.
The neutral isotropic kernels are X_alpha (1D) and X3_alpha (3D).
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from fracwave.kernels import (
    peak_location,
    x3_alpha,
    x_alpha,
    x_alpha_d2,
    y_alpha,
    y_alpha_d2,
)
from fracwave.quadrature import (
    DEFAULT_QUAD,
    QuadratureSpec,
    gauss_legendre_panels,
    graded_edges,
)
from fracwave.specfun import bessel_k_scaled, mittag_leffler, rgamma
from fracwave.symbols import FracParams, SphericalMeasure, ellipsoidal_matrix, f_direction
from fracwave.wright import (
    m_wright,
    m_wright_cutoff,
    m_wright_prime,
    n_wright,
    n_wright_prime,
)

__all__ = [
    "Which",
    "SolutionRequest",
    "green1d",
    "green1d_unit",
    "green3d_isotropic",
    "green3d_unit",
    "green3d_neutral_aniso",
    "green3d_aniso",
    "green3d_wave_mollified",
    "green_u23",
    "identity_check",
    "green_origin_1d",
]


class Which(str, enum.Enum):
    G = "G"
    H = "H"


@dataclass(frozen=True)
class SolutionRequest:
    """A batch of point evaluations of G or H."""

    params: FracParams
    dimension: int
    which: Which
    t: float
    points: np.ndarray
    measure: SphericalMeasure | None = None

    def __post_init__(self):
        if self.dimension not in (1, 3):
            raise ValueError("dimension must be 1 or 3")
        if not self.t > 0:
            raise ValueError("t must be positive")
        object.__setattr__(self, "which", Which(self.which))
        pts = np.asarray(self.points, dtype=float)
        if self.dimension == 3 and self.measure is not None and pts.shape[-1:] != (3,):
            raise ValueError("anisotropic 3D points must be 3-vectors")
        object.__setattr__(self, "points", pts)

    def evaluate(self, quad: QuadratureSpec = DEFAULT_QUAD) -> np.ndarray:
        p, which = self.params, self.which
        if self.dimension == 1:
            return np.asarray(green1d(p, self.t, self.points, which, quad))
        if self.measure is None:
            return np.asarray(green3d_isotropic(p, self.t, self.points, which, quad))
        if p.beta == p.alpha:
            return np.asarray(green3d_neutral_aniso(self.measure, p.alpha, self.t, self.points,
                                                    which, quad, rho=p.rho))
        return np.asarray(green3d_aniso(self.measure, p, self.t, self.points, which, quad))


def _out(x, res):
    return float(res) if np.ndim(x) == 0 else res


# --------------------------------------------------------------------------
# Mellin weight grids
# --------------------------------------------------------------------------

def _kernel_panel(alpha, quad: QuadratureSpec) -> float:
    """Log-panel width that resolves the kernel peak of width ~ sin(alpha pi/2)/alpha."""
    if alpha > 1:
        return min(quad.mellin_panel, math.sin(alpha * math.pi / 2) / alpha / 2.0)
    return min(quad.mellin_panel, 0.25)


@lru_cache(maxsize=32)
def _weight_grid(gamma, kind, log_lo, panel, nodes, tail):
    """Nodes s = log xi, weights and values of M_gamma (kind 'M') or N_gamma ('N')."""
    hi = math.log(m_wright_cutoff(gamma, tail))
    n = max(1, int(math.ceil((hi - log_lo) / panel)))
    s, w = gauss_legendre_panels(np.linspace(log_lo, hi, n + 1), nodes)
    xi = np.exp(s)
    vals = m_wright(gamma, xi) if kind == "M" else n_wright(gamma, xi)
    for arr in (s, w, vals):
        arr.setflags(write=False)
    return s, w, vals


def _grid_for(gamma, which, alpha, xmin, quad):
    # the kernel peak sits at xi ~ x / y_p; reach 8 decades below the smallest |x|
    log_lo = math.floor(math.log10(min(1.0, xmin))) - 8
    kind = "M" if which is Which.G else "N"
    return _weight_grid(gamma, kind, log_lo * math.log(10.0), _kernel_panel(alpha, quad),
                        quad.mellin_nodes, quad.xi_tail)


_NARROW_PEAK = 0.02


def _mellin_peaked(gamma, alpha, x, which, kernel, dim, quad):
    """Per-point form x^{1-dim} int W(x/y) kernel(y) y^{dim-1} dy/y, graded at the kernel peak.

    Used when alpha is so close to 2 that the kernel peak is too narrow for a shared grid.
    """
    weight = m_wright if which is Which.G else n_wright
    zcut = m_wright_cutoff(gamma, quad.xi_tail)
    width = math.sin(alpha * math.pi / 2) / alpha / 4.0
    center = math.log(peak_location(alpha))
    out = np.empty_like(x)
    for i, xv in enumerate(x):
        lo, hi = math.log(xv / zcut), math.log(1e8)
        s, w = gauss_legendre_panels(graded_edges(center, width, lo, hi, quad.mellin_panel),
                                     quad.mellin_nodes)
        y = np.exp(s)
        out[i] = xv ** (1 - dim) * np.sum(w * weight(gamma, xv / y) * kernel(y) * y ** (dim - 1))
    return out


def _mellin(gamma, alpha, x, which, kernel, dim, quad, chunk=256):
    """int W(xi) kernel(x / xi) xi^{-dim} d xi for x > 0 on the cached log-xi grid."""
    if alpha > 1 and math.sin(alpha * math.pi / 2) / alpha < _NARROW_PEAK:
        return _mellin_peaked(gamma, alpha, x, which, kernel, dim, quad)
    s, w, vals = _grid_for(gamma, which, alpha, float(np.min(x)), quad)
    xi = np.exp(s)
    wt = w * vals * xi ** (1.0 - dim)
    out = np.empty_like(x)
    for i in range(0, len(x), chunk):
        xs = x[i:i + chunk, None]
        out[i:i + chunk] = kernel(xs / xi) @ wt
    return out


def _origin_value(gamma, alpha, which):
    """G(1, 0) (or H(1, 0)) in 1D: int E(-|k|^alpha) dk / pi via the Mellin transform."""
    if alpha <= 1:
        return math.inf
    base = math.gamma(1.0 / alpha) * math.gamma(1.0 - 1.0 / alpha) / (math.pi * alpha)
    return base * float(rgamma(1.0 - gamma if which is Which.G else 2.0 - gamma))


def green_origin_1d(gamma, alpha, which="G") -> float:
    """Value at x = 0 of the 1D solution at t = 1 with unit coefficient."""
    return _origin_value(gamma, alpha, Which(which))


# --------------------------------------------------------------------------
# 1D and 3D isotropic
# --------------------------------------------------------------------------

def green1d_unit(gamma, alpha, x, which="G", quad: QuadratureSpec = DEFAULT_QUAD):
    """1D G or H at t = 1 for the symbol -|k|^alpha (rho = M = 1)."""
    which = Which(which)
    x = np.asarray(x, dtype=float)
    a = np.atleast_1d(np.abs(x)).ravel()
    if not (0 < gamma <= 1 and 0 < alpha <= 2):
        raise ValueError("need 0 < gamma <= 1 and 0 < alpha <= 2")
    if gamma == 1:
        if alpha == 2:
            if which is Which.G:
                raise ValueError("beta = alpha = 2: G is the delta pair (delta(x-1) + delta(x+1))/2")
            res = np.where(a < 1, 0.5, np.where(a == 1, 0.25, 0.0))
        else:
            res = (x_alpha if which is Which.G else y_alpha)(alpha, a)
        return _out(x, res.reshape(np.shape(x)) if np.ndim(x) else res)
    if alpha == 2:
        res = 0.5 * (m_wright(gamma, a) if which is Which.G else n_wright(gamma, a))
        return _out(x, np.asarray(res).reshape(np.shape(x)) if np.ndim(x) else res)
    res = np.empty_like(a)
    zero = a == 0
    res[zero] = _origin_value(gamma, alpha, which)
    if np.any(~zero):
        res[~zero] = _mellin(gamma, alpha, a[~zero], which, lambda y: x_alpha(alpha, y), 1, quad)
    return _out(x, res.reshape(np.shape(x)))


def _coef(params: FracParams):
    return params.mass_m / params.rho


def green1d(params: FracParams, t, x, which="G", quad: QuadratureSpec = DEFAULT_QUAD):
    """G(t, x) or H(t, x) in 1D for the isotropic symbol -M|k|^alpha.

    Scaling: with a = M / rho, G(t, x) = a^{-1/alpha} t^{-gamma} G1(x / (a^{1/alpha} t^gamma))
    and H(t, x) = a^{-1/alpha} t^{1-gamma} H1(same).
    """
    which = Which(which)
    if not t > 0:
        raise ValueError("t must be positive")
    g, al = params.gamma, params.alpha
    ell = _coef(params) ** (1.0 / al) * t ** g
    x = np.asarray(x, dtype=float)
    val = np.asarray(green1d_unit(g, al, x / ell, which, quad)) / ell
    if which is Which.H:
        val = val * t
    return _out(x, val)


def green3d_unit(gamma, alpha, r, which="G", quad: QuadratureSpec = DEFAULT_QUAD):
    """3D radial G or H at t = 1 for the symbol -|k|^alpha."""
    which = Which(which)
    r = np.asarray(r, dtype=float)
    a = np.atleast_1d(r).ravel()
    if np.any(a <= 0):
        raise ValueError(f"3D solutions are singular at r = 0 (local behaviour r^{alpha - 3:g})")
    if gamma == 1:
        if alpha == 2:
            raise ValueError("beta = alpha = 2 gives a spherical shell; use green3d_wave_mollified")
        res = x3_alpha(alpha, a) if which is Which.G else x_alpha(alpha, a) / (2 * math.pi * a ** 2)
    elif alpha == 2:
        d = m_wright_prime(gamma, a) if which is Which.G else n_wright_prime(gamma, a)
        res = -np.asarray(d) / (4.0 * math.pi * a)
    else:
        res = _mellin(gamma, alpha, a, which, lambda y: x3_alpha(alpha, y), 3, quad)
    return _out(r, np.asarray(res).reshape(np.shape(r)))


def green3d_isotropic(params: FracParams, t, r, which="G", quad: QuadratureSpec = DEFAULT_QUAD):
    """Radial 3D G(t, r) or H(t, r); G(t, r) = a^{-3/alpha} t^{-3 gamma} G1(r / ell)."""
    which = Which(which)
    if not t > 0:
        raise ValueError("t must be positive")
    g, al = params.gamma, params.alpha
    ell = _coef(params) ** (1.0 / al) * t ** g
    r = np.asarray(r, dtype=float)
    val = np.asarray(green3d_unit(g, al, r / ell, which, quad)) / ell ** 3
    if which is Which.H:
        val = val * t
    return _out(r, val)


# --------------------------------------------------------------------------
# Neutral anisotropic case: sphere integral
# --------------------------------------------------------------------------

def _fibonacci_sphere(n=1024):
    i = np.arange(n) + 0.5
    z = 1.0 - 2.0 * i / n
    phi = math.pi * (1.0 + 5 ** 0.5) * i
    s = np.sqrt(1.0 - z * z)
    return np.stack([s * np.cos(phi), s * np.sin(phi), z], axis=1)


def _frame(xhat, measure: SphericalMeasure):
    """Orthonormal (e1, e2) perpendicular to xhat, built from the first usable atom."""
    cands = list(measure.directions) + list(np.eye(3)[np.argsort(np.abs(xhat))])
    for v in cands:
        w = v - (v @ xhat) * xhat
        n = np.linalg.norm(w)
        if n > 1e-3:
            e1 = w / n
            return e1, np.cross(xhat, e1)
    raise AssertionError("unreachable: some axis is always transverse")


def _u_nodes(alpha, r, c_lo, c_hi, quad: QuadratureSpec, umin=1e-8):
    """Log-spaced polar nodes u in (umin, 1], refined where u r / c crosses the kernel peak."""
    lo, hi = math.log(umin), 0.0
    yp = max(peak_location(alpha), 1e-3)
    band_lo = math.log(c_lo * yp / r) - 1.5
    band_hi = math.log(c_hi / r) + 1.5
    fine = min(quad.sphere_panel, math.sin(alpha * math.pi / 2) / alpha / 2.0)
    coarse = quad.sphere_panel
    edges = [lo]
    pos = lo
    while pos < hi:
        step = fine if band_lo - fine <= pos <= band_hi else coarse
        if pos < band_lo and pos + step > band_lo:
            step = band_lo - pos
        pos = min(hi, pos + step)
        edges.append(pos)
    s, w = gauss_legendre_panels(np.array(edges), quad.sphere_nodes)
    u = np.exp(s)
    return u, w * u


def _neutral_series_leads(alpha, which):
    """Coefficients of |v|^{alpha-3} and |v|^{2 alpha-3} in K''(v) near v = 0."""
    A = math.sin(alpha * math.pi / 2) / math.pi
    c = math.cos(alpha * math.pi / 2)
    if which is Which.G:
        return A * (alpha - 1) * (alpha - 2), -2 * A * c * (2 * alpha - 1) * (2 * alpha - 2)
    return A * (2 - alpha), 2 * A * c * (2 * alpha - 2)


def _c_range(measure, alpha, t, rho, basis):
    # sample in the point's own frame so the node layout rotates with the problem
    dirs = np.concatenate([_fibonacci_sphere() @ basis, measure.directions])
    f = f_direction(measure, alpha, dirs)
    c = t * (f / rho) ** (1.0 / alpha)
    return float(c.min()), float(c.max())


def _neutral_point(measure, alpha, t, x, which, quad, rho):
    r = float(np.linalg.norm(x))
    if r == 0:
        raise ValueError(f"3D solutions are singular at x = 0 (local behaviour |x|^{alpha - 3:g})")
    xhat = x / r
    e1, e2 = _frame(xhat, measure)
    c_range = _c_range(measure, alpha, t, rho, np.stack([e1, e2, xhat]))
    nphi = quad.sphere_nodes_phi
    phi = 2.0 * math.pi * np.arange(nphi) / nphi
    ring = np.cos(phi)[:, None] * e1 + np.sin(phi)[:, None] * e2          # (nphi, 3)
    u, wu = _u_nodes(alpha, r, *c_range, quad)
    sn = np.sqrt(1.0 - u * u)
    khat = u[:, None, None] * xhat + sn[:, None, None] * ring[None, :, :]  # (nu, nphi, 3)
    c = t * (f_direction(measure, alpha, khat) / rho) ** (1.0 / alpha)
    c0 = t * (f_direction(measure, alpha, ring) / rho) ** (1.0 / alpha)
    v = u[:, None] * r / c
    k2 = x_alpha_d2(alpha, v) if which is Which.G else y_alpha_d2(alpha, v)
    g = u[:, None] ** (3.0 - alpha) * k2 / c ** 3
    l0, l1 = _neutral_series_leads(alpha, which)
    g0 = l0 * r ** (alpha - 3.0) * c0 ** (-alpha)
    g1 = l1 * r ** (2 * alpha - 3.0) * c0 ** (-2 * alpha)
    resid = g - g0 - g1 * u[:, None] ** alpha
    # sum azimuth first: antipodal pairs cancel the odd-in-u part before the singular weight
    ring_sum = resid.sum(axis=1) * (2.0 * math.pi / nphi)
    fp = np.sum(wu * u ** (alpha - 3.0) * ring_sum)
    fp += (2.0 * math.pi / nphi) * (g0.sum() / (alpha - 2.0) + g1.sum() / (2.0 * alpha - 2.0))
    # u in (-1, 0) mirrors u in (0, 1) under k -> -k
    val = -2.0 * fp / (8.0 * math.pi ** 2)
    return val * t if which is Which.H else val


def green3d_wave_mollified(matrix, t, x, epsilon, which="G"):
    """alpha = beta = 2 with Q(k) = -k . matrix k, smoothed by exp(-eps^2 k.matrix k / 2).

    In coordinates x' = matrix^{-1/2} x it is the classical shell convolved with
    a Gaussian of width eps:
      H = [exp(-(r-t)^2/2e^2) - exp(-(r+t)^2/2e^2)] / (4 pi r sqrt(2 pi) e),   G = dH/dt.
    """
    which = Which(which)
    m = np.asarray(matrix, dtype=float)
    ev, vec = np.linalg.eigh(m)
    if np.any(ev <= 0):
        raise ValueError("the ellipsoidal matrix must be positive definite")
    inv_sqrt = (vec / np.sqrt(ev)) @ vec.T
    x = np.asarray(x, dtype=float)
    r = np.linalg.norm(x @ inv_sqrt.T, axis=-1)
    e2 = epsilon * epsilon
    b = t / e2
    env = np.exp(-(r * r + t * t) / (2 * e2)) / (4 * math.pi * math.sqrt(2 * math.pi) * epsilon)
    # sinh(b r) / r without the r -> 0 singularity
    shr = np.where(r > 1e-8, np.sinh(b * r) / np.where(r > 1e-8, r, 1.0), b)
    if which is Which.H:
        val = 2.0 * env * shr
    else:
        val = env * (2.0 * np.cosh(b * r) - 2.0 * t * shr) / e2
    val = val / math.sqrt(float(np.prod(ev)))
    return _out(r, val)


def green3d_neutral_aniso(measure: SphericalMeasure, alpha, t, x, which="G",
                          quad: QuadratureSpec = DEFAULT_QUAD, rho: float = 1.0,
                          epsilon: float | None = None):
    """Neutral (beta = alpha) 3D solution for a general spherical measure.

    G(t, x) = -(1/(8 pi^2)) int_S X''(k.x / c) / c^3 dS(k),  c = t (F(k) / rho)^{1/alpha},
    (t Y'' for H). The integrand is singular like |k.x|^{alpha-3} on the great circle
    k . x = 0; the integral is taken as its Hadamard finite part, which is what the
    Fourier integral produces. alpha = 2 needs ``epsilon`` (mollified shell).
    """
    which = Which(which)
    if not 1 < alpha <= 2:
        raise ValueError("neutral anisotropic solutions need 1 < alpha <= 2")
    if not t > 0:
        raise ValueError("t must be positive")
    x = np.asarray(x, dtype=float)
    if alpha == 2:
        if epsilon is None:
            raise ValueError("alpha = 2 is a shell distribution; pass epsilon for the mollified field")
        return green3d_wave_mollified(ellipsoidal_matrix(measure) / rho, t, x, epsilon, which)
    pts = x.reshape(-1, 3)
    res = np.array([_neutral_point(measure, alpha, t, p, which, quad, rho) for p in pts])
    return float(res[0]) if x.ndim == 1 else res.reshape(x.shape[:-1])


def green3d_aniso(measure: SphericalMeasure, params: FracParams, t, x, which="G",
                  quad: QuadratureSpec = DEFAULT_QUAD):
    """3D solution for beta < alpha: Mellin superposition of neutral anisotropic solutions.

    G(t, x) = t^{-3 gamma} int M_gamma(xi) G_n(1, y / xi) xi^{-3} d xi,  y = x / t^gamma,
    evaluated in q = |y| / xi as |y|^{-2} int M(|y|/q) G_n(1, q y_hat) q^2 dq/q,
    with the q^{-alpha-3} far field of G_n added analytically beyond ``far_radius``.
    """
    which = Which(which)
    g, al = params.gamma, params.alpha
    if g == 1:
        return green3d_neutral_aniso(measure, al, t, x, which, quad, rho=params.rho)
    if al == 2:
        raise NotImplementedError("beta < alpha = 2 with a general measure reduces to an "
                                  "ellipsoidal change of variables of the isotropic solution")
    x = np.asarray(x, dtype=float)
    pts = x.reshape(-1, 3) / t ** g
    zcut = m_wright_cutoff(g, quad.xi_tail)
    out = []
    for y in pts:
        ny = float(np.linalg.norm(y))
        if ny == 0:
            raise ValueError("3D solutions are singular at x = 0")
        yhat = y / ny
        e1, e2 = _frame(yhat, measure)
        cr = _c_range(measure, al, 1.0, params.rho, np.stack([e1, e2, yhat]))
        lo, hi = math.log(ny / zcut), math.log(quad.far_radius)
        edges = graded_edges(math.log(max(peak_location(al), 1e-3) * cr[0]),
                             _kernel_panel(al, quad), lo, hi, quad.mellin_panel)
        s, w = gauss_legendre_panels(edges, quad.mellin_nodes)
        q = np.exp(s)
        weight = m_wright(g, ny / q) if which is Which.G else n_wright(g, ny / q)
        kern = np.array([_neutral_point(measure, al, 1.0, qq * yhat, Which.G, quad, params.rho)
                         for qq in q])
        val = np.sum(w * weight * kern * q ** 2)
        # far field: G_n ~ C q^{-alpha-3}, weight -> W(0)
        w0 = float(rgamma(1.0 - g if which is Which.G else 2.0 - g))
        qmax = q[-1]
        val += w0 * kern[-1] * qmax ** (al + 3) * quad.far_radius ** (-al - 1) / (al + 1)
        out.append(val / ny ** 2)
    res = np.array(out) * t ** (-3 * g)
    if which is Which.H:
        res = res * t
    return float(res[0]) if x.ndim == 1 else res.reshape(x.shape[:-1])


# --------------------------------------------------------------------------
# gamma = 2/3 representation and the subordination identity
# --------------------------------------------------------------------------

def green_u23(alpha, r, panel: float = 0.25, nodes: int = 16):
    """1D G at t = 1 for gamma = 2/3 from the Bessel form of M_{2/3}.

    G(1, x) = (3^{-1/2} 2^{-2/3} / pi) int_0^inf zeta^{-1/3} Z(zeta)
              X_alpha(2^{1/3} x / (3 zeta^{1/3})) d zeta,
    Z(zeta) = (K_{1/3}(zeta) + K_{2/3}(zeta)) e^{-zeta}. Integrated in log zeta.
    """
    if not 0 < alpha < 2:
        raise ValueError("alpha must lie in (0, 2)")
    r = np.asarray(r, dtype=float)
    a = np.atleast_1d(np.abs(r)).ravel()
    if np.any(a == 0):
        raise ValueError("green_u23 needs r != 0 (use green_origin_1d)")
    pre = 3.0 ** -0.5 * 2.0 ** (-2.0 / 3.0) / math.pi
    yp = max(peak_location(alpha), 1e-3)
    out = np.empty_like(a)
    width = min(panel, 3.0 * math.sin(alpha * math.pi / 2) / alpha / 2.0) if alpha > 1 else panel
    for i, x in enumerate(a):
        # X peaks where 2^{1/3} x / (3 zeta^{1/3}) = y_p
        center = math.log(2.0 * x ** 3 / (27.0 * yp ** 3))
        lo = min(center, 0.0) - 60.0
        edges = graded_edges(center, width, lo, math.log(45.0), 1.0)
        s, w = gauss_legendre_panels(edges, nodes)
        zeta = np.exp(s)
        zed = (bessel_k_scaled(1.0 / 3.0, zeta) + bessel_k_scaled(2.0 / 3.0, zeta)) * np.exp(-2.0 * zeta)
        arg = 2.0 ** (1.0 / 3.0) * x / (3.0 * np.cbrt(zeta))
        out[i] = pre * np.sum(w * zeta ** (2.0 / 3.0) * zed * x_alpha(alpha, arg))
    return _out(r, out.reshape(np.shape(r)))


def identity_check(beta, alpha, kappa_grid, which="G", panel: float = 0.25, nodes: int = 16) -> float:
    """Max |E_beta(-kappa^alpha) - int M_gamma(xi) E_alpha(-(kappa xi)^alpha) d xi| over the grid.

    With which='H' the pair is E_{beta,2} and N_gamma.
    """
    which = Which(which)
    g = beta / alpha
    kappa = np.atleast_1d(np.asarray(kappa_grid, dtype=float))
    mu = 1.0 if which is Which.G else 2.0
    lhs = mittag_leffler(beta, mu, -kappa ** alpha)
    if g == 1:
        rhs = mittag_leffler(alpha, 1.0, -kappa ** alpha)
        return float(np.max(np.abs(lhs - rhs)))
    hi = math.log(m_wright_cutoff(g))
    s, w = gauss_legendre_panels(np.linspace(-30.0, hi, int(math.ceil((hi + 30.0) / panel)) + 1), nodes)
    xi = np.exp(s)
    weight = (m_wright(g, xi) if which is Which.G else n_wright(g, xi)) * xi * w
    rhs = np.array([weight @ mittag_leffler(alpha, 1.0, -(k * xi) ** alpha) for k in kappa])
    return float(np.max(np.abs(lhs - rhs)))
