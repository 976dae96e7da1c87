import math

import numpy as np
import pytest

from fracwave.green import (
    SolutionRequest,
    Which,
    green1d,
    green1d_unit,
    green3d_aniso,
    green3d_isotropic,
    green3d_neutral_aniso,
    green3d_unit,
    green3d_wave_mollified,
    green_origin_1d,
    green_u23,
    identity_check,
)
from fracwave.kernels import x3_alpha, x_alpha, y_alpha
from fracwave.quadrature import DEFAULT_QUAD
from fracwave.symbols import FracParams, SphericalMeasure, orthonormal_atoms
from fracwave.wright import m_wright, m_wright_prime, n_wright

X = np.linspace(0.1, 4.0, 14)


def test_neutral_case_is_the_kernel():
    p = FracParams(1.5, 1.5)
    np.testing.assert_allclose(green1d(p, 1.0, X), x_alpha(1.5, X), rtol=1e-14)
    np.testing.assert_allclose(green1d(p, 1.0, X, "H"), y_alpha(1.5, X), rtol=1e-14)
    np.testing.assert_allclose(green3d_isotropic(p, 1.0, X), x3_alpha(1.5, X), rtol=1e-14)


@pytest.mark.parametrize("beta", [1.2, 1.5, 1.8])
def test_alpha_two_branches(beta):
    g = beta / 2
    p = FracParams(beta, 2.0)
    np.testing.assert_allclose(green1d(p, 1.0, X), m_wright(g, X) / 2, atol=1e-15)
    np.testing.assert_allclose(green1d(p, 1.0, X, "H"), n_wright(g, X) / 2, atol=1e-15)
    np.testing.assert_allclose(green3d_isotropic(p, 1.0, X), -m_wright_prime(g, X) / (4 * math.pi * X), atol=1e-15)


@pytest.mark.parametrize("alpha", [1.5, 1.9])
def test_gamma_two_thirds_two_paths(alpha):
    np.testing.assert_allclose(green1d_unit(2.0 / 3.0, alpha, X), green_u23(alpha, X), atol=1e-12)


@pytest.mark.parametrize("beta,alpha", [(1.2, 1.6), (1.3, 1.9)])
def test_h_is_time_integral_of_g(beta, alpha):
    p = FracParams(beta, alpha)
    t, h = 1.3, 1e-4
    for dim, fn in ((1, green1d), (3, green3d_isotropic)):
        dh = (fn(p, t + h, X, "H") - fn(p, t - h, X, "H")) / (2 * h)
        np.testing.assert_allclose(dh, fn(p, t, X, "G"), rtol=1e-6, atol=1e-9)


def test_origin_value_is_the_limit():
    # G(0) - G(x) ~ c |x|^{alpha-1}: the cusp left by the k^{-alpha} spectral tail
    for which in ("G", "H"):
        g0 = green_origin_1d(0.8, 1.5, which)
        d = [g0 - green1d_unit(0.8, 1.5, np.array([x]), which)[0] for x in (1e-6, 1e-8)]
        assert d[0] / d[1] == pytest.approx(100.0 ** 0.5, rel=1e-3)
        assert green1d_unit(0.8, 1.5, np.array([0.0]), which)[0] == g0
    assert green_origin_1d(0.5, 0.9) == math.inf


def test_one_dimensional_mass():
    # int G dx = 1 and int H dx = t, from the kernel tail and a log-spaced body
    p = FracParams(1.4, 1.8)
    from fracwave.quadrature import gauss_legendre_panels
    s, w = gauss_legendre_panels(np.linspace(-12.0, 9.0, 85), 16)
    x = np.exp(s)
    for which, ref in (("G", 1.0), ("H", 1.0)):
        body = 2 * np.sum(w * x * green1d(p, 1.0, x, which)) + 2 * x[0] * green1d(p, 1.0, 0.0, which)
        # G ~ C x^{-1-alpha} with C from the last node
        last = green1d(p, 1.0, x[-1], which)
        tail = 2 * last * x[-1] / 1.8
        assert body + tail == pytest.approx(ref, abs=1e-7)


def test_material_constants_rescale():
    a = FracParams(1.3, 1.7, rho=2.0, mass_m=0.5)
    base = FracParams(1.3, 1.7)
    ell = (0.5 / 2.0) ** (1 / 1.7)
    np.testing.assert_allclose(green1d(a, 1.0, X), green1d(base, 1.0, X / ell) / ell, rtol=1e-13)


def test_scaling_law():
    from fracwave.validation import scaling_residual
    p = FracParams(1.3, 1.9)
    for dim in (1, 3):
        for which in ("G", "H"):
            assert scaling_residual(p, dim, which, 2.0) < 1e-10


def test_identity_check_small():
    assert identity_check(1.2, 1.6, np.linspace(0, 5, 21)) < 1e-10
    assert identity_check(1.2, 1.6, np.linspace(0, 5, 21), "H") < 1e-10


def test_solution_request_dispatch():
    p = FracParams(1.3, 1.9)
    req = SolutionRequest(p, 1, "G", 1.0, X)
    assert req.which is Which.G
    np.testing.assert_array_equal(req.evaluate(), green1d(p, 1.0, X))
    req3 = SolutionRequest(p, 3, Which.H, 1.0, X)
    np.testing.assert_array_equal(req3.evaluate(DEFAULT_QUAD), green3d_isotropic(p, 1.0, X, "H"))
    with pytest.raises(ValueError):
        SolutionRequest(p, 2, "G", 1.0, X)
    with pytest.raises(ValueError):
        SolutionRequest(p, 1, "G", 0.0, X)
    with pytest.raises(ValueError):
        SolutionRequest(p, 3, "G", 1.0, X, measure=SphericalMeasure.uniform(1.0))


def test_errors():
    with pytest.raises(ValueError):
        green1d(FracParams(1.3, 1.9), -1.0, X)
    with pytest.raises(ValueError):
        green3d_unit(0.7, 1.5, np.array([0.0, 1.0]))
    with pytest.raises(ValueError):
        green1d_unit(1.0, 2.0, X)
    with pytest.raises(ValueError):
        green3d_neutral_aniso(orthonormal_atoms(), 2.0, 1.0, np.ones(3))


def test_uniform_measure_neutral_matches_isotropic():
    x = np.array([[0.3, 0.4, 0.1], [1.0, -0.5, 0.8]])
    r = np.linalg.norm(x, axis=1)
    a = green3d_neutral_aniso(SphericalMeasure.uniform(1.0), 1.6, 1.0, x)
    np.testing.assert_allclose(a, x3_alpha(1.6, r), rtol=1e-7)
    h = green3d_neutral_aniso(SphericalMeasure.uniform(1.0), 1.6, 1.0, x, "H")
    np.testing.assert_allclose(h, x_alpha(1.6, r) / (2 * math.pi * r ** 2), rtol=1e-7)


def test_neutral_time_scaling():
    mu = SphericalMeasure(np.eye(3), np.array([0.5, 0.3, 0.2]))
    x = np.array([0.7, -0.2, 0.5])
    t = 1.7
    a = green3d_neutral_aniso(mu, 1.7, t, x)
    b = green3d_neutral_aniso(mu, 1.7, 1.0, x / t) / t ** 3
    assert a == pytest.approx(b, rel=1e-10)


def test_subordinated_uniform_matches_isotropic():
    p = FracParams(1.4, 1.7)
    x = np.array([[0.8, 0.6, 0.0]])
    a = green3d_aniso(SphericalMeasure.uniform(1.0), p, 1.0, x)
    assert a[0] == pytest.approx(green3d_isotropic(p, 1.0, 1.0), rel=1e-4)


def test_mollified_wave_mass():
    m = np.diag([0.5, 0.3, 0.2])
    x = np.linspace(-6, 6, 121)
    dx = x[1] - x[0]
    pts = np.stack(np.meshgrid(x, x, x, indexing="ij"), axis=-1)
    for which, ref in (("G", 1.0), ("H", 1.5)):
        val = green3d_wave_mollified(m, 1.5, pts, 0.3, which)
        assert float(val.sum() * dx ** 3) == pytest.approx(ref, rel=1e-6)
    with pytest.raises(ValueError):
        green3d_wave_mollified(-m, 1.0, pts[0, 0], 0.3)
