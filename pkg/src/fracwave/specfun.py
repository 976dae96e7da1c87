"""Foundation special functions: Gamma, Mittag-Leffler, modified Bessel K, Airy Ai.

Everything here works on real (or, for Gamma, complex) numpy arrays and is
evaluated in double precision.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from fracwave.quadrature import gauss_legendre_panels

__all__ = [
    "Precision",
    "PoleError",
    "ConvergenceError",
    "gamma",
    "rgamma",
    "loggamma",
    "mittag_leffler",
    "ml_series",
    "ml_integral",
    "bessel_k",
    "bessel_k_scaled",
    "airy_ai",
    "airy_ai_prime",
]


class PoleError(ValueError):
    """Raised when Gamma is evaluated at a non-positive integer."""


class ConvergenceError(ArithmeticError):
    """Raised when a series or quadrature fails to reach its tolerance."""


@dataclass(frozen=True)
class Precision:
    rel_tol: float = 1e-15
    abs_tol: float = 1e-300
    max_terms: int = 600

    def __post_init__(self):
        if not (self.rel_tol > 0 and self.abs_tol > 0 and self.max_terms >= 1):
            raise ValueError(f"invalid precision {self}")


DEFAULT_PRECISION = Precision()

# Lanczos approximation, g = 7, n = 9.
_G = 7.0
_COEF = np.array([
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
])
_HALF_LOG_2PI = 0.5 * math.log(2.0 * math.pi)


def _lanczos_sum(z):
    x = np.full_like(z, _COEF[0])
    for i in range(1, len(_COEF)):
        x = x + _COEF[i] / (z + i)
    return x


def _log_sin_pi(z):
    """log(sin(pi z)) for complex z, stable for large |Im z| (branch arbitrary)."""
    z = np.asarray(z, dtype=complex)
    flip = z.imag < 0
    w = np.where(flip, np.conj(z), z)
    # sin(pi w) = exp(-i pi w) (exp(2 i pi w) - 1) / (2i), |exp(2 i pi w)| <= 1
    val = -1j * np.pi * w + np.log((np.exp(2j * np.pi * w) - 1.0) / 2j)
    return np.where(flip, np.conj(val), val)


def loggamma(z):
    """Complex log-Gamma (principal value up to a multiple of 2*pi*i).

    Only ``exp(loggamma(z))`` is guaranteed; the imaginary part may differ from
    the principal branch by a multiple of ``2*pi``.
    """
    z = np.asarray(z, dtype=complex)
    out = np.empty_like(z)
    right = z.real >= 0.5
    zr = z[right] - 1.0
    t = zr + _G + 0.5
    out[right] = _HALF_LOG_2PI + (zr + 0.5) * np.log(t) - t + np.log(_lanczos_sum(zr))
    if np.any(~right):
        zl = z[~right]
        out[~right] = math.log(math.pi) - _log_sin_pi(zl) - loggamma(1.0 - zl)
    return out


def _is_pole(x):
    return (np.real(x) <= 0) & (np.imag(x) == 0) & (np.real(x) == np.round(np.real(x)))


def gamma(x):
    """Gamma function for real or complex arguments.

    Real input raises :class:`PoleError` at ``0, -1, -2, ...``.
    """
    arr = np.asarray(x)
    if np.any(_is_pole(arr)):
        raise PoleError(f"Gamma has a pole at non-positive integer argument(s): {arr[_is_pole(arr)]}")
    if np.iscomplexobj(arr):
        res = np.exp(loggamma(arr))
        return res if arr.ndim else complex(res)
    xr = np.asarray(arr, dtype=float)
    res = _gamma_real(xr).reshape(xr.shape)
    return res if xr.ndim else float(res)


def _gamma_real(x):
    x = np.atleast_1d(x).astype(float)
    out = np.empty_like(x)
    right = x >= 0.5
    zr = x[right] - 1.0
    t = zr + _G + 0.5
    # direct power form keeps full relative accuracy for moderate x
    with np.errstate(over="ignore"):
        small = zr < 140
        val = np.empty_like(zr)
        val[small] = (math.sqrt(2 * math.pi) * t[small] ** (zr[small] + 0.5)
                      * np.exp(-t[small]) * _lanczos_sum(zr[small]))
        val[~small] = np.exp(_HALF_LOG_2PI + (zr[~small] + 0.5) * np.log(t[~small])
                             - t[~small] + np.log(_lanczos_sum(zr[~small])))
    out[right] = val
    left = ~right
    if np.any(left):
        xl = x[left]
        out[left] = math.pi / (np.sin(math.pi * xl) * _gamma_real(1.0 - xl))
    return out


def rgamma(x):
    """Reciprocal Gamma ``1/Gamma(x)`` for real x, equal to 0 at the poles."""
    x = np.asarray(x, dtype=float)
    pole = _is_pole(x)
    safe = np.where(pole, 0.5, x)
    with np.errstate(over="ignore"):
        out = 1.0 / _gamma_real(safe).reshape(safe.shape)
    out = np.where(pole, 0.0, out)
    return out if x.ndim else float(out)


def _log_abs_rgamma(x):
    """(log|1/Gamma(x)|, sign(1/Gamma(x))) for real x; log = -inf at poles."""
    x = np.asarray(x, dtype=float)
    pole = _is_pole(x)
    safe = np.where(pole, 0.5, x)
    lg = loggamma(safe).real
    sign = np.ones_like(safe)
    neg = safe < 0
    # Gamma(x) < 0 on (-2k-1, -2k)
    sign[neg] = np.where(np.floor(safe[neg]) % 2 == 1, -1.0, 1.0)
    lg = np.where(pole, np.inf, lg)
    return -lg, sign


# --------------------------------------------------------------------------
# Mittag-Leffler
# --------------------------------------------------------------------------

ML_CROSSOVER = 8.0


def ml_series(beta, mu, z, precision: Precision = DEFAULT_PRECISION):
    """Power series sum_n z^n / Gamma(beta n + mu) for real z."""
    z = np.atleast_1d(np.asarray(z, dtype=float))
    absz = np.abs(z)
    zmax = float(np.max(absz)) if z.size else 0.0
    logz = np.log(np.where(absz > 0, absz, 1.0))
    sgn = np.sign(z)
    total = np.zeros_like(z)
    log_zmax = math.log(zmax) if zmax > 0 else -np.inf
    for n in range(precision.max_terms):
        lr, s = _log_abs_rgamma(beta * n + mu)
        if n == 0:
            total = total + (s * math.exp(lr) if np.isfinite(lr) else 0.0)
            continue
        if np.isfinite(lr):
            total = total + np.where(absz > 0, s * sgn ** n * np.exp(n * logz + lr), 0.0)
        # magnitude bound that ignores accidental zeros of 1/Gamma
        bound = n * log_zmax - loggamma(beta * n + mu + 1e-7).real
        if n > 2 and bound < math.log(precision.rel_tol * 1e-3) and beta * n + mu > 1:
            return total
    raise ConvergenceError(f"Mittag-Leffler series did not converge in {precision.max_terms} terms")


def _ml_nodes(beta, mu):
    """Log-spaced Gauss-Legendre nodes for the cut integral on [0, inf)."""
    # lower part: integrand of the subtracted form behaves like r^(beta-mu+1+min(1,beta))
    # so the piece below e^lo is ~ e^{lo q}; pick lo to make it ~1e-17
    q = beta - mu + 1.0 + min(1.0, beta)
    lo = min(math.log(1e-17), math.log(1e-17) / q)
    low = gauss_legendre_panels(np.linspace(lo, 0.0, int(math.ceil(-lo / 2.0)) + 1), 12)
    high = gauss_legendre_panels(np.linspace(0.0, math.log(80.0), 36), 10)
    return low, high


def ml_integral(beta, mu, x):
    """E_{beta,mu}(-x) for x > 0 from the Hankel-cut integral plus pole residues.

    Valid for ``0 < beta < 2`` and ``beta != 1``, and for ``beta == 2``. The
    representation is exact; accuracy is that of the fixed log-spaced quadrature.
    """
    x = np.atleast_1d(np.asarray(x, dtype=float))
    if np.any(x <= 0):
        raise ValueError("ml_integral needs x > 0")
    p = beta - mu + 1.0
    if p <= 0:
        # E_{b,m}(-x) = (1/Gamma(m-b) - E_{b,m-b}(-x)) / x keeps the cut integral convergent
        return (rgamma(mu - beta) - ml_integral(beta, mu - beta, x)) / x
    cb = math.cos(math.pi * beta)
    smu, sbm = math.sin(math.pi * mu), math.sin(math.pi * (beta - mu))
    (s_lo, w_lo), (s_hi, w_hi) = _ml_nodes(beta, mu)
    xx = x[:, None]

    def rational(r):
        rb = r ** beta
        return (rb * smu - xx * sbm) / (rb * rb + 2 * xx * rb * cb + xx * xx) / math.pi

    # [0, 1]: f(0) r^p / p plus the subtracted remainder
    f0 = -sbm / (math.pi * x)
    r = np.exp(s_lo)[None, :]
    f = np.exp(-r) * rational(r)
    part_lo = f0 / p + np.sum(w_lo * r ** p * (f - f0[:, None]), axis=1)
    r = np.exp(s_hi)[None, :]
    part_hi = np.sum(w_hi * r ** p * np.exp(-r) * rational(r), axis=1)
    out = part_lo + part_hi
    if beta > 1:
        sstar = x ** (1.0 / beta) * np.exp(1j * math.pi / beta)
        out = out + (2.0 / beta) * np.real(sstar ** (1.0 - mu) * np.exp(sstar))
    return out


def _series_limit(beta, mu):
    """Largest |z| (at most ML_CROSSOVER) where no series term exceeds e^2."""
    if beta >= 1:
        return ML_CROSSOVER
    n = np.arange(1, 400)
    lg = loggamma(beta * n + mu + 1e-7).real
    # peak of n log x - lg(n) below 2  <=>  log x < min_n (2 + lg(n)) / n
    return float(min(ML_CROSSOVER, math.exp(np.min((2.0 + lg) / n))))


def mittag_leffler(beta, mu, z, precision: Precision = DEFAULT_PRECISION):
    """Two-parameter Mittag-Leffler function E_{beta,mu}(z) for real z <= 0.

    Uses the power series for ``|z| <= 8`` and an exact cut-integral plus
    residue representation beyond.
    """
    if not 0 < beta <= 2:
        raise ValueError(f"beta must lie in (0, 2], got {beta}")
    zarr = np.asarray(z, dtype=float)
    scalar = zarr.ndim == 0
    z1 = np.atleast_1d(zarr)
    if np.any(z1 > 0):
        raise ValueError("mittag_leffler is implemented for z <= 0 only")
    x = -z1
    out = np.empty_like(x)
    closed = _ml_closed_form(beta, mu, x)
    if closed is not None:
        out = closed
    else:
        small = x <= _series_limit(beta, mu)
        if np.any(small):
            out[small] = ml_series(beta, mu, -x[small], precision)
        if np.any(~small):
            if beta == 1:
                raise ConvergenceError("E_{1,mu} with mu not in {1,2} is only available for |z| <= 8")
            out[~small] = ml_integral(beta, mu, x[~small])
    return float(out[0]) if scalar else out.reshape(zarr.shape)


def _ml_closed_form(beta, mu, x):
    if beta == 1 and mu == 1:
        return np.exp(-x)
    if beta == 1 and mu == 2:
        with np.errstate(invalid="ignore", divide="ignore"):
            return np.where(x > 1e-8, -np.expm1(-x) / np.where(x > 0, x, 1.0), 1 - x / 2)
    if beta == 2 and mu == 1:
        return np.cos(np.sqrt(x))
    if beta == 2 and mu == 2:
        s = np.sqrt(x)
        return np.sinc(s / math.pi)
    return None


# --------------------------------------------------------------------------
# Bessel K and Airy
# --------------------------------------------------------------------------

_BK_STEP = 0.05


def bessel_k_scaled(nu, x):
    """exp(x) K_nu(x) for x > 0 by trapezoid quadrature of the cosh integral.

    exp(x) K_nu(x) = int_0^inf exp(-x (cosh t - 1)) cosh(nu t) dt.
    The integrand is analytic in a strip, so the trapezoid rule converges
    geometrically in the step size.
    """
    x = np.asarray(x, dtype=float)
    if np.any(x <= 0):
        raise ValueError("bessel_k needs x > 0")
    if np.any(x < 1e-250):
        raise OverflowError("K_nu(x) overflows for x this close to 0")
    scalar = x.ndim == 0
    x1 = np.atleast_1d(x).ravel()
    # x (cosh T - 1) = 750 + |nu| T is far past underflow
    tmax = np.arccosh(1.0 + (750.0 + 10 * abs(nu)) / np.min(x1))
    t = np.arange(0.0, tmax + _BK_STEP, _BK_STEP)
    w = np.full_like(t, _BK_STEP)
    w[0] = 0.5 * _BK_STEP
    out = np.empty_like(x1)
    chunk = max(1, 200000 // len(t))
    cm1 = 2.0 * np.sinh(t / 2) ** 2  # cosh t - 1 without cancellation
    ch = np.cosh(nu * t)
    for i in range(0, len(x1), chunk):
        xs = x1[i:i + chunk, None]
        out[i:i + chunk] = np.sum(w * np.exp(-xs * cm1) * ch, axis=1)
    out = out.reshape(np.shape(x))
    return float(out) if scalar else out


def bessel_k(nu, x):
    """Modified Bessel function of the second kind K_nu(x), x > 0."""
    x = np.asarray(x, dtype=float)
    res = bessel_k_scaled(nu, x) * np.exp(-x)
    return float(res) if np.ndim(res) == 0 else res


_AI0 = 3.0 ** (-2.0 / 3.0) / 1.3541179394264004169   # 1/Gamma(2/3)
_AIP0 = 3.0 ** (-1.0 / 3.0) / 2.6789385347077476337  # 1/Gamma(1/3)
AIRY_SERIES_CUT = 0.5


def _airy_coefficients(nterms=30):
    a = np.empty(nterms)
    b = np.empty(nterms)
    for k in range(nterms):
        # 3^k (1/3)_k / (3k)!  and  3^k (2/3)_k / (3k+1)!
        a[k] = math.exp(k * math.log(3) + math.lgamma(k + 1 / 3) - math.lgamma(1 / 3) - math.lgamma(3 * k + 1))
        b[k] = math.exp(k * math.log(3) + math.lgamma(k + 2 / 3) - math.lgamma(2 / 3) - math.lgamma(3 * k + 2))
    return a, b


_AIRY_A, _AIRY_B = _airy_coefficients()


def _airy_maclaurin(x, derivative=False):
    """Maclaurin series of Ai (or Ai') for small x >= 0."""
    x = np.asarray(x, dtype=float)[..., None]
    k = np.arange(len(_AIRY_A))
    if derivative:
        f = np.sum(3 * k[1:] * _AIRY_A[1:] * x ** (3 * k[1:] - 1), axis=-1)
        g = np.sum((3 * k + 1) * _AIRY_B * x ** (3 * k), axis=-1)
    else:
        f = np.sum(_AIRY_A * x ** (3 * k), axis=-1)
        g = np.sum(_AIRY_B * x ** (3 * k + 1), axis=-1)
    return _AI0 * f - _AIP0 * g


def airy_ai(x):
    """Airy function Ai(x) for x >= 0 via Ai(x) = sqrt(x/3) K_{1/3}(2/3 x^{3/2}) / pi."""
    x = np.asarray(x, dtype=float)
    if np.any(x < 0):
        raise ValueError("airy_ai is implemented for x >= 0 only")
    out = np.empty_like(np.atleast_1d(x))
    x1 = np.atleast_1d(x)
    small = x1 <= AIRY_SERIES_CUT
    out[small] = _airy_maclaurin(x1[small])
    xb = x1[~small]
    if xb.size:
        zeta = 2.0 / 3.0 * xb ** 1.5
        out[~small] = np.sqrt(xb / 3.0) / math.pi * bessel_k(1.0 / 3.0, zeta)
    return float(out[0]) if x.ndim == 0 else out.reshape(x.shape)


def airy_ai_prime(x):
    """Ai'(x) for x >= 0 via Ai'(x) = -x K_{2/3}(2/3 x^{3/2}) / (pi sqrt 3)."""
    x = np.asarray(x, dtype=float)
    if np.any(x < 0):
        raise ValueError("airy_ai_prime is implemented for x >= 0 only")
    x1 = np.atleast_1d(x)
    out = np.empty_like(x1)
    small = x1 <= AIRY_SERIES_CUT
    out[small] = _airy_maclaurin(x1[small], derivative=True)
    xb = x1[~small]
    if xb.size:
        zeta = 2.0 / 3.0 * xb ** 1.5
        out[~small] = -xb / (math.pi * math.sqrt(3.0)) * bessel_k(2.0 / 3.0, zeta)
    return float(out[0]) if x.ndim == 0 else out.reshape(x.shape)
