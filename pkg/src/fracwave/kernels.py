"""Spatial kernels X_alpha, Y_alpha, their derivatives, the 3D kernels and the radial lift.

X_alpha is the inverse Fourier transform of E_alpha(-|k|^alpha), the Green's
function of the neutral (beta = alpha) 1D problem at t = 1:

    X_alpha(y) = A |y|^{alpha-1} / D(|y|),
    A = sin(alpha pi / 2) / pi,   D(y) = 1 + 2 c y^alpha + y^{2 alpha},   c = cos(alpha pi / 2).

Y_alpha, the transform of E_{alpha,2}(-|k|^alpha), satisfies y Y' = -X and
vanishes at infinity, so Y_alpha(y) = int_{|y|}^inf X_alpha(z) dz / z.
"""

from __future__ import annotations

import csv
import enum
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable

import numpy as np
from scipy.interpolate import CubicSpline

from fracwave.quadrature import gauss_legendre, gauss_legendre_panels, graded_edges

__all__ = [
    "KernelKind",
    "KernelProfile",
    "x_alpha",
    "x_alpha_d1",
    "x_alpha_d2",
    "y_alpha",
    "y_alpha_d1",
    "y_alpha_d2",
    "x3_alpha",
    "z_alpha",
    "radial_lift",
    "kernel_profile",
    "peak_location",
]


class KernelKind(str, enum.Enum):
    X = "X"
    Y = "Y"
    X3 = "X3"
    Z = "Z"
    G = "G"
    H = "H"


@dataclass(frozen=True)
class KernelProfile:
    """A tabulated 1D profile of one of the kernels (or a Green's function)."""

    alpha: float
    ys: np.ndarray
    values: np.ndarray
    kind: KernelKind
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        ys = np.asarray(self.ys, dtype=float)
        vals = np.asarray(self.values, dtype=float)
        object.__setattr__(self, "ys", ys)
        object.__setattr__(self, "values", vals)
        object.__setattr__(self, "kind", KernelKind(self.kind))
        if not 0 < self.alpha <= 2:
            raise ValueError(f"alpha must lie in (0, 2], got {self.alpha}")
        if ys.ndim != 1 or ys.shape != vals.shape:
            raise ValueError("ys and values must be 1D arrays of equal length")
        if np.any(np.diff(ys) <= 0):
            raise ValueError("ys must be strictly increasing")
        if len(vals) > 2 and not np.all(np.isfinite(vals[1:-1])):
            raise ValueError("profile values must be finite at interior points")
        if self.kind is KernelKind.X and np.any(vals < 0):
            raise ValueError("an X profile cannot be negative")
        ys.setflags(write=False)
        vals.setflags(write=False)

    def spline(self) -> CubicSpline:
        return CubicSpline(self.ys, self.values)

    def to_csv(self, path) -> None:
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["y", "value"])
            for y, v in zip(self.ys, self.values):
                w.writerow([f"{y:.17g}", f"{v:.17g}"])

    @classmethod
    def from_csv(cls, path, alpha: float, kind) -> "KernelProfile":
        data = np.loadtxt(Path(path), delimiter=",", skiprows=1, ndmin=2)
        return cls(alpha, data[:, 0], data[:, 1], kind)


# --------------------------------------------------------------------------
# X_alpha and its derivatives
# --------------------------------------------------------------------------

def _check_alpha(alpha, allow_two=False):
    if not (0 < alpha < 2 or (allow_two and alpha == 2)):
        if alpha == 2:
            raise ValueError("alpha = 2 gives the distribution (delta(y-1) + delta(y+1))/2; "
                             "use the closed-form alpha = 2 branches")
        raise ValueError(f"alpha must lie in (0, 2), got {alpha}")


def _consts(alpha):
    return math.sin(alpha * math.pi / 2) / math.pi, math.cos(alpha * math.pi / 2)


def _shift(alpha, a):
    """a^alpha + cos(alpha pi/2), accurate where both are close to +-1 (alpha near 2)."""
    with np.errstate(divide="ignore"):
        return np.expm1(alpha * np.log(a)) + 2.0 * math.cos(alpha * math.pi / 4) ** 2


def _denom(alpha, a):
    """D = 1 + 2 c a^alpha + a^{2 alpha} = (a^alpha + c)^2 + sin^2(alpha pi/2)."""
    return _shift(alpha, a) ** 2 + math.sin(alpha * math.pi / 2) ** 2


def _out(y, res):
    return float(res) if np.ndim(y) == 0 else res


def peak_location(alpha) -> float:
    """Where the denominator D is smallest: y = (-cos(alpha pi/2))^{1/alpha} for alpha > 1."""
    c = math.cos(alpha * math.pi / 2)
    return (-c) ** (1.0 / alpha) if c < 0 else 0.0


def x_alpha(alpha, y):
    """X_alpha(y) for 0 < alpha < 2 (infinite at y = 0 when alpha < 1)."""
    _check_alpha(alpha)
    A, c = _consts(alpha)
    y = np.asarray(y, dtype=float)
    a = np.abs(y)
    with np.errstate(divide="ignore"):
        res = A * a ** (alpha - 1.0) / _denom(alpha, a)
    return _out(y, res)


def _d_parts(alpha, a):
    sh = _shift(alpha, a)
    D = _denom(alpha, a)
    D1 = 2.0 * alpha * a ** (alpha - 1.0) * sh
    D2 = 2.0 * alpha * ((alpha - 1.0) * a ** (alpha - 2.0) * sh + alpha * a ** (2.0 * alpha - 2.0))
    return D, D1, D2


def _origin_guard(alpha, y, what):
    if np.any(np.asarray(y) == 0) and alpha != 1:
        raise ValueError(f"{what} of X_alpha is singular at y = 0 for alpha != 1")


def x_alpha_d1(alpha, y):
    """dX_alpha/dy (odd in y); at y = 0 only alpha = 1 is finite (value 0)."""
    _check_alpha(alpha)
    _origin_guard(alpha, y, "the derivative")
    A, _ = _consts(alpha)
    y = np.asarray(y, dtype=float)
    a = np.where(y == 0, 1.0, np.abs(y))
    D, D1, _ = _d_parts(alpha, a)
    p = alpha - 1.0
    res = A * (p * a ** (p - 1.0) / D - a ** p * D1 / D ** 2)
    res = np.where(y == 0, 0.0, np.sign(y) * res)
    return _out(y, res)


def x_alpha_d2(alpha, y):
    """d^2 X_alpha / dy^2 (even in y); at y = 0 only alpha = 1 is finite (-2/pi)."""
    _check_alpha(alpha)
    _origin_guard(alpha, y, "the second derivative")
    A, _ = _consts(alpha)
    y = np.asarray(y, dtype=float)
    a = np.where(y == 0, 1.0, np.abs(y))
    D, D1, D2 = _d_parts(alpha, a)
    p = alpha - 1.0
    res = A * (p * (p - 1.0) * a ** (p - 2.0) / D
               - 2.0 * p * a ** (p - 1.0) * D1 / D ** 2
               - a ** p * D2 / D ** 2
               + 2.0 * a ** p * D1 ** 2 / D ** 3)
    res = np.where(y == 0, -2.0 / math.pi, res)
    return _out(y, res)


# --------------------------------------------------------------------------
# Y_alpha
# --------------------------------------------------------------------------

_Y_LO, _Y_HI = 0.5, 2.0
_Y_NODES = 12


def _chebyshev_u(x, n):
    """U_0(x), ..., U_{n-1}(x); sum_n U_n(x) t^n = 1 / (1 - 2 x t + t^2)."""
    u = np.empty(n)
    u[0] = 1.0
    if n > 1:
        u[1] = 2.0 * x
    for k in range(2, n):
        u[k] = 2.0 * x * u[k - 1] - u[k - 2]
    return u


def _n_terms(alpha, ratio):
    # geometric rate ratio^alpha, with |U_n| <= n + 1
    q = ratio ** alpha
    return int(math.ceil(math.log(1e-19) / math.log(q))) + 8


@dataclass(frozen=True)
class _YTable:
    """Per-alpha data for Y_alpha: panel suffix sums on [_Y_LO, _Y_HI] and series coefficients."""

    alpha: float
    edges: np.ndarray
    suffix: np.ndarray
    u_low: np.ndarray
    u_high: np.ndarray


_Y_CACHE: dict = {}


def _mid_integrand(alpha, s):
    # X(z)/z dz = X(z) ds with z = e^s
    z = np.exp(s)
    A, c = _consts(alpha)
    za = z ** alpha
    return A * za / z / _denom(alpha, z)


def _y_table(alpha) -> _YTable:
    tab = _Y_CACHE.get(alpha)
    if tab is not None:
        return tab
    lo, hi = math.log(_Y_LO), math.log(_Y_HI)
    width = min(0.05, math.sin(alpha * math.pi / 2) / alpha / 4.0)
    yp = peak_location(alpha)
    center = math.log(yp) if yp > 0 else lo - 1.0
    edges = graded_edges(center, width, lo, hi, 0.1)
    s, w = gauss_legendre_panels(edges, _Y_NODES)
    panel = (w * _mid_integrand(alpha, s)).reshape(len(edges) - 1, _Y_NODES).sum(axis=1)
    suffix = np.concatenate([np.cumsum(panel[::-1])[::-1], [0.0]])
    c = math.cos(alpha * math.pi / 2)
    u_low = _chebyshev_u(-c, _n_terms(alpha, _Y_LO))
    u_high = _chebyshev_u(-c, _n_terms(alpha, 1.0 / _Y_HI))
    tab = _YTable(alpha, edges, suffix, u_low, u_high)
    _Y_CACHE[alpha] = tab
    return tab


def _y_tail(alpha, u, y):
    """A int_y^inf z^{alpha-2} / D dz for y >= _Y_HI, from the expansion of 1/D in z^{-alpha}."""
    A, _ = _consts(alpha)
    n = np.arange(len(u))
    p = alpha + 1.0 + n * alpha
    return A * np.sum(u * np.exp(-np.outer(np.log(y), p)) / p, axis=1)


def _y_low(alpha, u, y):
    """A int_y^{_Y_LO} z^{alpha-2} / D dz for 0 < y <= _Y_LO, from the expansion in z^alpha."""
    A, _ = _consts(alpha)
    n = np.arange(len(u))
    p = alpha - 1.0 + n * alpha
    ly = np.log(y)[:, None]
    lz = math.log(_Y_LO)
    zero = np.abs(p) < 1e-14
    safe = np.where(zero, 1.0, p)
    # (Z^p - y^p) / p, with the p -> 0 limit log(Z / y)
    terms = np.where(zero, lz - ly, -np.expm1(safe * (ly - lz)) * np.exp(safe * lz) / safe)
    return A * np.sum(u * terms, axis=1)


def _y_mid(tab: _YTable, y):
    """A int_y^{_Y_HI} ... for _Y_LO <= y <= _Y_HI using panel suffix sums plus one partial panel."""
    ly = np.log(y)
    k = np.clip(np.searchsorted(tab.edges, ly, side="right") - 1, 0, len(tab.edges) - 2)
    right = tab.edges[k + 1]
    x, w = gauss_legendre(-1.0, 1.0, _Y_NODES)
    h = 0.5 * (right - ly)
    s = ly[:, None] + h[:, None] * (x + 1.0)
    part = np.sum(w * _mid_integrand(tab.alpha, s), axis=1) * h
    return part + tab.suffix[k + 1]


def y_alpha(alpha, y):
    """Y_alpha(y) = int_{|y|}^inf X_alpha(z) dz / z, the transform of E_{alpha,2}(-|k|^alpha).

    Non-negative with unit mass; infinite at y = 0 for alpha <= 1.
    """
    _check_alpha(alpha)
    tab = _y_table(alpha)
    y = np.asarray(y, dtype=float)
    a = np.atleast_1d(np.abs(y)).ravel()
    out = np.empty_like(a)
    zero = a == 0
    high = a >= _Y_HI
    low = (a <= _Y_LO) & ~zero
    mid = ~(zero | high | low)
    if np.any(zero):
        if alpha <= 1:
            out[zero] = np.inf
        else:
            full = _y_low(alpha, tab.u_low, np.array([1e-300]))[0]
            out[zero] = full + tab.suffix[0] + _y_tail(alpha, tab.u_high, np.array([_Y_HI]))[0]
    rest = _y_tail(alpha, tab.u_high, np.array([_Y_HI]))[0]
    if np.any(high):
        out[high] = _y_tail(alpha, tab.u_high, a[high])
    if np.any(mid):
        out[mid] = _y_mid(tab, a[mid]) + rest
    if np.any(low):
        out[low] = _y_low(alpha, tab.u_low, a[low]) + tab.suffix[0] + rest
    return float(out[0]) if y.ndim == 0 else out.reshape(y.shape)


def y_alpha_d1(alpha, y):
    """dY_alpha/dy = -X_alpha(y) / y."""
    y = np.asarray(y, dtype=float)
    with np.errstate(divide="ignore", invalid="ignore"):
        res = -x_alpha(alpha, y) / y
    return _out(y, res)


def y_alpha_d2(alpha, y):
    """d^2 Y_alpha / dy^2 = -X'(y)/y + X(y)/y^2 for y != 0."""
    y = np.asarray(y, dtype=float)
    if np.any(y == 0):
        raise ValueError("second derivative of Y_alpha is singular at y = 0")
    res = -x_alpha_d1(alpha, y) / y + x_alpha(alpha, y) / y ** 2
    return _out(y, res)


# --------------------------------------------------------------------------
# 3D kernels and the radial lift
# --------------------------------------------------------------------------

def z_alpha(alpha, y):
    """Z_alpha(y) = y^{3-alpha} X3_alpha(y), regular at y = 0 with Z(0) = -A (alpha-1) / (2 pi)."""
    _check_alpha(alpha)
    A, c = _consts(alpha)
    y = np.asarray(y, dtype=float)
    if np.any(y < 0):
        raise ValueError("z_alpha needs y >= 0")
    ya = y ** alpha
    D = _denom(alpha, y)
    res = -(A / (2.0 * math.pi)) * ((alpha - 1.0) / D - 2.0 * alpha * ya * _shift(alpha, y) / D ** 2)
    return _out(y, res)


def x3_alpha(alpha, y):
    """X3_alpha(r) = -X_alpha'(r) / (2 pi r), the 3D neutral Green's function at t = 1."""
    y = np.asarray(y, dtype=float)
    if np.any(y <= 0):
        raise ValueError("x3_alpha needs y > 0")
    res = z_alpha(alpha, y) * y ** (alpha - 3.0)
    return _out(y, res)


def radial_lift(f, r, df: Callable | None = None, d2f0: float | None = None):
    """3D radial function F(r) = -f'(r) / (2 pi r) of an even 1D profile f.

    ``f`` is either a KernelProfile (differentiated through a cubic spline) or
    a callable, in which case ``df`` must supply its derivative. At r = 0 the
    limit -f''(0) / (2 pi) is returned when ``d2f0`` (or a profile) allows it.
    """
    r = np.asarray(r, dtype=float)
    if np.any(r < 0):
        raise ValueError("radial_lift needs r >= 0")
    if isinstance(f, KernelProfile):
        sp = f.spline()
        deriv = sp.derivative()
        second0 = float(sp.derivative(2)(0.0)) if d2f0 is None else d2f0
    else:
        if df is None:
            raise ValueError("a callable profile needs its derivative df")
        deriv = df
        second0 = d2f0
    zero = r == 0
    if np.any(zero) and second0 is None:
        raise ValueError("F(0) needs f''(0)")
    safe = np.where(zero, 1.0, r)
    res = -np.asarray(deriv(safe), dtype=float) / (2.0 * math.pi * safe)
    if np.any(zero):
        res = np.where(zero, -second0 / (2.0 * math.pi), res)
    return _out(r, res)


_KERNELS = {
    KernelKind.X: x_alpha,
    KernelKind.Y: y_alpha,
    KernelKind.X3: x3_alpha,
    KernelKind.Z: z_alpha,
}


def kernel_profile(kind, alpha, ys) -> KernelProfile:
    """Tabulate X, Y, X3 or Z on a grid."""
    kind = KernelKind(kind)
    if kind not in _KERNELS:
        raise ValueError(f"kernel_profile handles X, Y, X3, Z; got {kind.value}")
    ys = np.asarray(ys, dtype=float)
    return KernelProfile(alpha, ys, _KERNELS[kind](alpha, ys), kind)
