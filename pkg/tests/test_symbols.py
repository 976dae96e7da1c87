import json
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.spatial.transform import Rotation

from fracwave.symbols import (
    FracParams,
    MeasureError,
    SphericalMeasure,
    caputo_derivative,
    classify_definiteness,
    dispersion,
    dispersion_wavenumber,
    dump_measure,
    ellipsoidal_matrix,
    f_direction,
    fractional_integral,
    generating_v_hessian,
    grad_q_hat,
    h_hat_isotropic,
    load_measure,
    measure_from_dict,
    orthonormal_atoms,
    q_hat,
    stiffness_symbol,
)
from fracwave.validation import constitutive_residuals


def test_uniform_symbol_is_isotropic_power():
    k = np.array([0.3, -1.2, 0.5])
    for a in (1.1, 1.5, 2.0):
        assert q_hat(SphericalMeasure.uniform(2.0), a, k) == pytest.approx(-2.0 * np.linalg.norm(k) ** a, rel=1e-14)
        np.testing.assert_allclose(generating_v_hessian(SphericalMeasure.uniform(1.0), a, k).trace(),
                                   q_hat(SphericalMeasure.uniform(1.0), a, k), rtol=1e-13)


def test_isotropic_hessian_of_symbol():
    k = np.array([0.4, 0.1, -0.9])
    h = 1e-5
    hess = np.empty((3, 3))
    for i in range(3):
        e = np.zeros(3)
        e[i] = h
        hess[i] = (grad_q_hat(SphericalMeasure.uniform(1.0), 1.6, k + e)
                   - grad_q_hat(SphericalMeasure.uniform(1.0), 1.6, k - e)) / (2 * h)
    np.testing.assert_allclose(h_hat_isotropic(1.6, 1.0, k), hess, rtol=1e-7, atol=1e-9)
    assert classify_definiteness(h_hat_isotropic(1.6, 1.0, k)) == "negative definite"


def test_constitutive_identities():
    res = constitutive_residuals(draws=30)
    assert max(res.values()) < 1e-9


@settings(max_examples=40, deadline=None)
@given(st.floats(1.01, 2.0), st.integers(0, 10_000))
def test_stiffness_contracts_to_symbol(alpha, seed):
    rng = np.random.default_rng(seed)
    d = rng.normal(size=(2, 3))
    d /= np.linalg.norm(d, axis=1)[:, None]
    mu = SphericalMeasure(d, rng.uniform(0.1, 1, 2), float(rng.uniform(0, 1)))
    k = rng.normal(size=3)
    c = stiffness_symbol(mu, alpha, k)
    assert -k @ c @ k == pytest.approx(q_hat(mu, alpha, k), rel=1e-10)
    np.testing.assert_allclose(c, c.T, atol=1e-14 * np.abs(c).max())


def test_rotation_covariance():
    rot = Rotation.random(random_state=5).as_matrix()
    mu = orthonormal_atoms((0.5, 0.3, 0.2))
    mu_r = orthonormal_atoms((0.5, 0.3, 0.2), rot)
    k = np.array([0.2, -0.7, 1.1])
    assert q_hat(mu_r, 1.7, rot @ k) == pytest.approx(q_hat(mu, 1.7, k), rel=1e-13)


def test_direction_function_and_ellipsoid():
    mu = orthonormal_atoms((0.5, 0.3, 0.2))
    np.testing.assert_allclose(ellipsoidal_matrix(mu), np.diag([0.5, 0.3, 0.2]), atol=1e-15)
    khat = np.eye(3)
    np.testing.assert_allclose(f_direction(mu, 1.5, khat), [0.5, 0.3, 0.2], rtol=1e-14)


def test_measure_file_round_trip(tmp_path):
    mu = SphericalMeasure(np.array([[0.0, 0.0, 1.0], [0.6, 0.8, 0.0]]), np.array([0.3, 0.2]), 0.5)
    path = tmp_path / "m.json"
    dump_measure(mu, path)
    back = load_measure(path)
    np.testing.assert_array_equal(back.directions, mu.directions)
    np.testing.assert_array_equal(back.weights, mu.weights)
    assert back.uniform_mass == 0.5


@pytest.mark.parametrize("raw", [
    [],
    {"atoms": [{"dir": [1.0, 1.0, 0.0], "weight": 1.0}]},
    {"atoms": [{"dir": [1.0, 0.0], "weight": 1.0}]},
    {"atoms": [{"weight": 1.0}]},
    {"uniform_mass": "lots"},
])
def test_bad_measures_rejected(raw):
    with pytest.raises(MeasureError):
        measure_from_dict(raw)


def test_bad_measure_file(tmp_path):
    p = tmp_path / "bad.json"
    p.write_text("{not json")
    with pytest.raises(MeasureError):
        load_measure(p)
    with pytest.raises(OSError):
        load_measure(tmp_path / "missing.json")


def test_frac_params_validation():
    assert FracParams(1.5, 1.9).gamma == pytest.approx(1.5 / 1.9)
    assert FracParams(1.5, 1.9).is_wave and not FracParams(1.0, 1.5).is_wave
    for bad in ((1.9, 1.5), (0.0, 1.0), (1.0, 2.5), (1.0, 1.5, -1.0)):
        with pytest.raises(ValueError):
            FracParams(*bad)


def test_classify_definiteness():
    assert classify_definiteness(np.diag([1.0, 2.0])) == "positive definite"
    assert classify_definiteness(np.diag([1.0, 0.0])) == "positive semidefinite"
    assert classify_definiteness(np.diag([-1.0, 0.0])) == "negative semidefinite"
    assert classify_definiteness(np.diag([-1.0, 1.0])) == "indefinite"
    with pytest.raises(ValueError):
        classify_definiteness(np.array([[0.0, 1.0], [0.0, 0.0]]))


@pytest.mark.parametrize("beta,alpha", [(1.5, 1.9), (1.2, 1.6), (2.0, 2.0), (1.0, 1.5)])
def test_dispersion_relation_is_satisfied(beta, alpha):
    p = FracParams(beta, alpha, rho=1.3, mass_m=0.7)
    omega = np.logspace(-1, 4, 11)
    k = dispersion_wavenumber(p, omega)
    lhs = p.rho * (-1j * omega) ** beta + p.mass_m * k ** alpha
    np.testing.assert_allclose(np.abs(lhs), 0.0, atol=1e-10 * np.abs(p.rho * omega ** beta).max())
    assert np.all(k.real > 0) and np.all(k.imag >= 0)
    att, vel = dispersion(p, omega)
    np.testing.assert_allclose(vel, omega / k.real)
    if beta == alpha == 2.0:
        assert np.all(att == 0)


def test_fractional_calculus_exact_cases():
    dt = 0.01
    t = np.arange(401) * dt
    for a in (0.3, 0.5, 1.0, 1.7):
        np.testing.assert_allclose(fractional_integral(a, t, dt), t ** (a + 1) / math.gamma(a + 2), atol=1e-13)
    for b in (1.3, 1.5, 1.8):
        np.testing.assert_allclose(caputo_derivative(b, t ** 2, dt), 2 * t ** (2 - b) / math.gamma(3 - b),
                                   atol=1e-11)
    np.testing.assert_allclose(caputo_derivative(2.0, t ** 2, dt), 2.0, atol=1e-10)
    with pytest.raises(ValueError):
        fractional_integral(0.0, t, dt)


def test_measure_json_schema_example(tmp_path):
    p = tmp_path / "m.json"
    p.write_text(json.dumps({"uniform_mass": 0.1, "atoms": [{"dir": [0, 0, 1], "weight": 0.9}]}))
    mu = load_measure(p)
    assert mu.directions.shape == (1, 3)
    assert not mu.is_isotropic
    assert SphericalMeasure.uniform(1.0).is_isotropic
