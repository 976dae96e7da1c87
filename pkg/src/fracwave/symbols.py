"""Anisotropic symbols, constitutive objects, dispersion and discrete fractional calculus.

The spatial operator has the Fourier symbol

    Q(k) = -int_S |k . y|^alpha mu(dy),

where mu is a finite measure on the unit sphere: a sum of weighted atoms plus
an optional uniform part. The uniform part with total mass M carries density
M (alpha + 1) / (4 pi), which makes its contribution exactly -M |k|^alpha.
"""

from __future__ import annotations

import json
import math
import warnings
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from fracwave.specfun import gamma as gamma_fn

__all__ = [
    "SphericalMeasure",
    "FracParams",
    "WaveVector",
    "MeasureError",
    "DegenerateDirectionError",
    "load_measure",
    "dump_measure",
    "orthonormal_atoms",
    "q_hat",
    "f_direction",
    "ellipsoidal_matrix",
    "grad_q_hat",
    "flux_symbol",
    "stiffness_symbol",
    "generating_v",
    "generating_v_hessian",
    "h_hat_isotropic",
    "classify_definiteness",
    "dispersion",
    "dispersion_wavenumber",
    "fractional_integral",
    "caputo_derivative",
]


class MeasureError(ValueError):
    """Malformed spherical measure (bad direction, weight or file)."""


class DegenerateDirectionError(ValueError):
    """F(k_hat) vanishes: the measure does not see this direction."""


@dataclass(frozen=True)
class SphericalMeasure:
    """Atoms (unit direction, positive weight) plus a uniform part of total mass ``uniform_mass``."""

    directions: np.ndarray = field(default_factory=lambda: np.zeros((0, 3)))
    weights: np.ndarray = field(default_factory=lambda: np.zeros(0))
    uniform_mass: float = 0.0

    def __post_init__(self):
        d = np.asarray(self.directions, dtype=float).reshape(-1, 3)
        w = np.asarray(self.weights, dtype=float).reshape(-1)
        if len(d) != len(w):
            raise MeasureError("one weight per direction is required")
        if np.any(np.abs(np.linalg.norm(d, axis=1) - 1.0) > 1e-12):
            raise MeasureError("atom directions must be unit vectors")
        if np.any(w <= 0):
            raise MeasureError("atom weights must be positive")
        if not self.uniform_mass >= 0:
            raise MeasureError("uniform_mass must be non-negative")
        if len(w) == 0 and self.uniform_mass == 0:
            raise MeasureError("the measure is empty")
        d.setflags(write=False)
        w.setflags(write=False)
        object.__setattr__(self, "directions", d)
        object.__setattr__(self, "weights", w)

    @classmethod
    def uniform(cls, mass: float) -> "SphericalMeasure":
        return cls(uniform_mass=mass)

    @property
    def is_isotropic(self) -> bool:
        return len(self.weights) == 0


@dataclass(frozen=True)
class FracParams:
    """Orders and material constants of the model; gamma = beta / alpha.

    Wave propagation needs 1 < beta; 0 < beta <= 1 is accepted so that the
    diffusive end of the family (used for comparison figures) can be evaluated.
    """

    beta: float
    alpha: float
    rho: float = 1.0
    mass_m: float = 1.0

    def __post_init__(self):
        if not (0 < self.beta <= self.alpha <= 2):
            raise ValueError(f"need 0 < beta <= alpha <= 2, got beta={self.beta}, alpha={self.alpha}")
        if not (self.rho > 0 and self.mass_m > 0):
            raise ValueError("rho and mass_m must be positive")

    @property
    def gamma(self) -> float:
        return self.beta / self.alpha

    @property
    def is_wave(self) -> bool:
        return self.beta > 1


@dataclass(frozen=True)
class WaveVector:
    k: np.ndarray

    def __post_init__(self):
        k = np.asarray(self.k, dtype=float).reshape(3)
        k.setflags(write=False)
        object.__setattr__(self, "k", k)

    @property
    def magnitude(self) -> float:
        return float(np.linalg.norm(self.k))

    @property
    def direction(self) -> np.ndarray:
        m = self.magnitude
        if m == 0:
            raise ValueError("the zero vector has no direction")
        return self.k / m


def _vec(k):
    return k.k if isinstance(k, WaveVector) else np.asarray(k, dtype=float)


def _check_order(alpha):
    if not 1 < alpha <= 2:
        raise ValueError(f"alpha must lie in (1, 2], got {alpha}")


# --------------------------------------------------------------------------
# Measure file
# --------------------------------------------------------------------------

def load_measure(path) -> SphericalMeasure:
    """Read ``{"uniform_mass": M, "atoms": [{"dir": [x, y, z], "weight": w}, ...]}``.

    Directions are normalized when within 1e-9 of unit length and rejected otherwise.
    """
    text = Path(path).read_text()  # OSError propagates as an IO failure
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise MeasureError(f"cannot read measure file {path}: {exc}") from exc
    return measure_from_dict(raw)


def measure_from_dict(raw: dict) -> SphericalMeasure:
    if not isinstance(raw, dict):
        raise MeasureError("measure must be a JSON object")
    dirs, weights = [], []
    for atom in raw.get("atoms", []):
        try:
            d = np.asarray(atom["dir"], dtype=float)
            w = float(atom["weight"])
        except (KeyError, TypeError, ValueError) as exc:
            raise MeasureError(f"bad atom entry {atom!r}") from exc
        n = np.linalg.norm(d)
        if d.shape != (3,) or abs(n - 1.0) > 1e-9:
            raise MeasureError(f"atom direction {atom['dir']} is not a unit 3-vector")
        dirs.append(d / n)
        weights.append(w)
    try:
        mass = float(raw.get("uniform_mass", 0.0))
    except (TypeError, ValueError) as exc:
        raise MeasureError("uniform_mass must be a number") from exc
    return SphericalMeasure(np.array(dirs).reshape(-1, 3), np.array(weights), mass)


def dump_measure(mu: SphericalMeasure, path) -> None:
    atoms = [{"dir": d.tolist(), "weight": float(w)} for d, w in zip(mu.directions, mu.weights)]
    Path(path).write_text(json.dumps({"uniform_mass": mu.uniform_mass, "atoms": atoms}, indent=2))


def orthonormal_atoms(weights=(1.0, 1.0, 1.0), rotation=None) -> SphericalMeasure:
    """Three atoms along an orthonormal frame (the columns of ``rotation``, default identity)."""
    frame = np.eye(3) if rotation is None else np.asarray(rotation, dtype=float)
    return SphericalMeasure(frame.T.copy(), np.asarray(weights, dtype=float))


# --------------------------------------------------------------------------
# Symbol and its derivatives
# --------------------------------------------------------------------------

def q_hat(mu: SphericalMeasure, alpha, k):
    """Q(k) = -sum_j w_j |k . y_j|^alpha - M |k|^alpha; k may be a stack of shape (..., 3)."""
    _check_order(alpha)
    k = _vec(k)
    proj = np.abs(k @ mu.directions.T)
    res = -(proj ** alpha) @ mu.weights
    if mu.uniform_mass:
        res = res - mu.uniform_mass * np.linalg.norm(k, axis=-1) ** alpha
    return float(res) if np.ndim(res) == 0 else res


def f_direction(mu: SphericalMeasure, alpha, khat, floor: float = 1e-12):
    """F(k_hat) = -Q(k_hat) > 0; raises when the measure is blind to k_hat."""
    khat = _vec(khat)
    if np.any(np.abs(np.linalg.norm(khat, axis=-1) - 1.0) > 1e-12):
        raise ValueError("khat must be a unit vector")
    f = -np.asarray(q_hat(mu, alpha, khat))
    if np.any(f < floor):
        raise DegenerateDirectionError("F(k_hat) vanishes: no atom sees this direction")
    return float(f) if f.ndim == 0 else f


def ellipsoidal_matrix(mu: SphericalMeasure) -> np.ndarray:
    """M = int y y^T mu(dy), so that Q(k) = -k . M k when alpha = 2.

    The uniform part contributes M I: at alpha = 2 its density 3M / (4 pi)
    integrates y y^T to M I.
    """
    d, w = mu.directions, mu.weights
    return (d.T * w) @ d + mu.uniform_mass * np.eye(3)


def grad_q_hat(mu: SphericalMeasure, alpha, k) -> np.ndarray:
    """grad Q = -alpha sum_j w_j sign(k.y_j)|k.y_j|^{alpha-1} y_j - M alpha |k|^{alpha-2} k."""
    _check_order(alpha)
    k = _vec(k)
    p = mu.directions @ k
    g = -alpha * (mu.weights * np.sign(p) * np.abs(p) ** (alpha - 1.0)) @ mu.directions
    if mu.uniform_mass:
        n = np.linalg.norm(k)
        if n == 0:
            raise ValueError("gradient of the uniform part is undefined at k = 0")
        g = g - mu.uniform_mass * alpha * n ** (alpha - 2.0) * k
    return g


def flux_symbol(mu: SphericalMeasure, alpha, k) -> np.ndarray:
    """Real vector v = -grad Q / alpha of the flux symbol K = grad Q / (i alpha) = i v.

    Euler's identity k . grad Q = alpha Q gives Q = i k . K = -k . v.
    """
    return -grad_q_hat(mu, alpha, k) / alpha


def stiffness_symbol(mu: SphericalMeasure, alpha, k) -> np.ndarray:
    """C(k) = -Hess Q / (alpha (alpha - 1)) = sum_j w_j |k.y_j|^{alpha-2} y_j y_j^T + uniform part.

    The uniform part is M |k|^{alpha-2} (I + (alpha-2) k_hat k_hat^T) / (alpha - 1).
    Atoms orthogonal to k are singular for alpha < 2 and are skipped with a warning.
    """
    _check_order(alpha)
    k = _vec(k)
    n = np.linalg.norm(k)
    if n == 0:
        raise ValueError("stiffness symbol needs k != 0")
    p = np.abs(mu.directions @ k)
    w = mu.weights.copy()
    if alpha < 2:
        bad = p <= 1e-14 * n
        if np.any(bad):
            warnings.warn(f"skipping {int(bad.sum())} atom(s) orthogonal to k (singular for alpha < 2)")
            w[bad] = 0.0
            p = np.where(bad, 1.0, p)
    coef = w * p ** (alpha - 2.0)
    C = (mu.directions.T * coef) @ mu.directions
    if mu.uniform_mass:
        kh = k / n
        C = C + mu.uniform_mass * n ** (alpha - 2.0) * (
            np.eye(3) + (alpha - 2.0) * np.outer(kh, kh)) / (alpha - 1.0)
    return C


def generating_v(mu: SphericalMeasure, alpha, k) -> float:
    """V(k) = -int |k.y|^{alpha+2} mu(dy) / ((alpha+1)(alpha+2)); uniform part -M|k|^{alpha+2}/((alpha+2)(alpha+3))."""
    _check_order(alpha)
    k = _vec(k)
    p = np.abs(mu.directions @ k)
    v = -float(mu.weights @ p ** (alpha + 2.0)) / ((alpha + 1.0) * (alpha + 2.0))
    if mu.uniform_mass:
        v -= mu.uniform_mass * np.linalg.norm(k) ** (alpha + 2.0) / ((alpha + 2.0) * (alpha + 3.0))
    return v


def generating_v_hessian(mu: SphericalMeasure, alpha, k) -> np.ndarray:
    """Hess V = -int |k.y|^alpha y y^T mu(dy); uniform part -M|k|^alpha (I + alpha k_hat k_hat^T)/(alpha+3).

    Its trace is Q(k).
    """
    _check_order(alpha)
    k = _vec(k)
    p = np.abs(mu.directions @ k)
    H = -(mu.directions.T * (mu.weights * p ** alpha)) @ mu.directions
    if mu.uniform_mass:
        n = np.linalg.norm(k)
        kh = k / n if n > 0 else np.zeros(3)
        H = H - mu.uniform_mass * n ** alpha * (np.eye(3) + alpha * np.outer(kh, kh)) / (alpha + 3.0)
    return H


def h_hat_isotropic(alpha, mass_m, k) -> np.ndarray:
    """H(k) = -M alpha (I - (2 - alpha) k_hat k_hat^T) |k|^{alpha-2}, the Hessian of -M|k|^alpha.

    Eigenvalues: -M alpha |k|^{alpha-2} (twice, transverse) and
    -M alpha (alpha - 1) |k|^{alpha-2} (along k).
    """
    _check_order(alpha)
    k = _vec(k)
    n = np.linalg.norm(k)
    if n == 0:
        raise ValueError("H needs k != 0")
    kh = k / n
    return -mass_m * alpha * (np.eye(3) - (2.0 - alpha) * np.outer(kh, kh)) * n ** (alpha - 2.0)


def classify_definiteness(matrix, tol: float = 1e-12) -> str:
    """One of 'positive definite', 'positive semidefinite', 'negative definite',
    'negative semidefinite', 'indefinite' for a symmetric matrix."""
    m = np.asarray(matrix, dtype=float)
    if not np.allclose(m, m.T, atol=tol * max(1.0, np.abs(m).max())):
        raise ValueError("matrix is not symmetric")
    ev = np.linalg.eigvalsh(0.5 * (m + m.T))
    scale = tol * max(1.0, np.abs(ev).max())
    if np.all(ev > scale):
        return "positive definite"
    if np.all(ev < -scale):
        return "negative definite"
    if np.all(ev >= -scale):
        return "positive semidefinite"
    if np.all(ev <= scale):
        return "negative semidefinite"
    return "indefinite"


# --------------------------------------------------------------------------
# Dispersion
# --------------------------------------------------------------------------

def dispersion_wavenumber(params: FracParams, omega):
    """Complex wavenumber of a time-harmonic wave exp(i(k x - omega t)).

    rho p^beta + M k^alpha = 0 with p = -i omega; the root with Re k > 0 and
    Im k >= 0 is k = (rho/M)^{1/alpha} omega^gamma exp(i pi (1 - beta/2) / alpha).
    """
    omega = np.asarray(omega, dtype=float)
    if np.any(omega <= 0):
        raise ValueError("omega must be positive")
    b, a = params.beta, params.alpha
    # all alpha-th roots of -(rho/M) p^beta, p^beta = omega^beta exp(-i pi beta / 2)
    base = math.pi - math.pi * b / 2.0
    roots = [base / a + 2.0 * math.pi * j / a for j in range(-2, 3)]
    ok = [th for th in roots if math.cos(th) > 1e-15 and math.sin(th) >= -1e-15]
    if not ok:
        raise ArithmeticError("no outgoing, non-growing root of the dispersion relation")
    theta = min(ok, key=abs)
    mod = (params.rho / params.mass_m) ** (1.0 / a) * omega ** params.gamma
    k = mod * np.exp(1j * theta)
    return complex(k) if k.ndim == 0 else k


def dispersion(params: FracParams, omega):
    """(attenuation Im k, phase velocity omega / Re k)."""
    k = np.asarray(dispersion_wavenumber(params, omega))
    att = np.maximum(k.imag, 0.0)
    vel = np.asarray(omega, dtype=float) / k.real
    if k.ndim == 0:
        return float(att), float(vel)
    return att, vel


# --------------------------------------------------------------------------
# Discrete fractional calculus
# --------------------------------------------------------------------------

def _product_trapezoid_weights(order, n):
    """b_m for m = 0..n-1 and the first-node weights a_{0,m} for m = 0..n-1."""
    m = np.arange(n, dtype=float)
    p = order + 1.0
    b = np.ones(n)
    b[1:] = (m[1:] + 1.0) ** p - 2.0 * m[1:] ** p + (m[1:] - 1.0) ** p
    a0 = np.where(m > 0, np.maximum(m - 1.0, 0.0) ** p - (m - order - 1.0) * m ** order, 0.0)
    return b, a0


def fractional_integral(order, samples, dt):
    """Riemann-Liouville integral I^order on a uniform grid, exact for piecewise-linear data.

    Product-trapezoid weights: I f(t_n) ~ dt^order / Gamma(order + 2) *
    [a_{0,n} f_0 + sum_{j=1}^{n} b_{n-j} f_j].
    """
    if not order > 0:
        raise ValueError("integration order must be positive")
    f = np.asarray(samples, dtype=float)
    n = len(f)
    b, a0 = _product_trapezoid_weights(order, n)
    conv = np.convolve(f[1:], b)[: n - 1] if n > 1 else np.zeros(0)
    out = np.empty(n)
    out[0] = 0.0
    out[1:] = a0[1:] * f[0] + conv
    return out * dt ** order / float(gamma_fn(order + 2.0))


def _derivative(f, dt, times):
    for _ in range(times):
        f = np.gradient(f, dt, edge_order=2)
    return f


def caputo_derivative(beta, samples, dt):
    """Caputo derivative D^beta = I^{n-beta} D^n with n - 1 < beta <= n (plain derivative for integer beta)."""
    if not beta > 0:
        raise ValueError("derivative order must be positive")
    f = np.asarray(samples, dtype=float)
    n = int(math.ceil(beta))
    dn = _derivative(f, dt, n)
    if n == beta:
        return dn
    return fractional_integral(n - beta, dn, dt)
