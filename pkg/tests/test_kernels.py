import math

import numpy as np
import pytest
from scipy import integrate

from fracwave.kernels import (
    KernelKind,
    KernelProfile,
    kernel_profile,
    peak_location,
    radial_lift,
    x3_alpha,
    x_alpha,
    x_alpha_d1,
    x_alpha_d2,
    y_alpha,
    y_alpha_d1,
    y_alpha_d2,
    z_alpha,
)
from fracwave.validation import kernel_mass

ALPHAS = [0.5, 1.0, 1.2, 1.5, 1.9]


def test_cauchy_and_log_at_alpha_one():
    y = np.array([0.01, 0.3, 1.0, 2.5, 40.0])
    np.testing.assert_allclose(x_alpha(1.0, y), 1.0 / (math.pi * (1.0 + y ** 2)), rtol=1e-14)
    np.testing.assert_allclose(y_alpha(1.0, y), np.log1p(1.0 / y ** 2) / (2.0 * math.pi), rtol=1e-12)


@pytest.mark.parametrize("alpha", ALPHAS)
def test_unit_mass(alpha):
    assert abs(kernel_mass(alpha, "X") - 1.0) < 1e-10
    assert abs(kernel_mass(alpha, "Y") - 1.0) < 1e-10


def test_mass_check_detects_a_wrong_kernel():
    # mutation: a 1% error in the kernel must show up in the normalization check
    bad = lambda a, y: 1.01 * x_alpha(a, y)  # noqa: E731
    assert abs(kernel_mass(1.5, "X", kernel=bad) - 1.0) > 5e-3


@pytest.mark.parametrize("alpha", ALPHAS)
def test_even_and_nonnegative(alpha):
    y = np.linspace(0.05, 6.0, 40)
    np.testing.assert_array_equal(x_alpha(alpha, y), x_alpha(alpha, -y))
    np.testing.assert_allclose(y_alpha(alpha, y), y_alpha(alpha, -y), rtol=1e-14)
    assert np.all(x_alpha(alpha, y) >= 0) and np.all(y_alpha(alpha, y) >= 0)


@pytest.mark.parametrize("alpha", [0.7, 1.3, 1.5, 1.9])
def test_y_is_x_over_y_integrated(alpha):
    # H = int_0^t G dt' gives Y(y) = int_y^inf X(u) / u du and Y' = -X / y
    for y in (0.4, 1.0, 3.0):
        val, _ = integrate.quad(lambda u: x_alpha(alpha, u) / u, y, np.inf, epsabs=1e-13, epsrel=1e-12, limit=400)
        assert y_alpha(alpha, y) == pytest.approx(val, rel=1e-9)
    y = np.array([0.4, 1.0, 3.0])
    np.testing.assert_allclose(y_alpha_d1(alpha, y), -x_alpha(alpha, y) / y, rtol=1e-12)


@pytest.mark.parametrize("alpha", [0.6, 1.0, 1.5, 1.9])
def test_derivatives_match_finite_differences(alpha):
    y = np.array([0.3, 0.9, 2.0, 5.0])
    h = 1e-5
    fd1 = (x_alpha(alpha, y + h) - x_alpha(alpha, y - h)) / (2 * h)
    fd2 = (x_alpha(alpha, y + h) - 2 * x_alpha(alpha, y) + x_alpha(alpha, y - h)) / h ** 2
    np.testing.assert_allclose(x_alpha_d1(alpha, y), fd1, rtol=1e-7, atol=1e-10)
    np.testing.assert_allclose(x_alpha_d2(alpha, y), fd2, rtol=1e-4, atol=1e-6)
    fd2y = (y_alpha_d1(alpha, y + h) - y_alpha_d1(alpha, y - h)) / (2 * h)
    np.testing.assert_allclose(y_alpha_d2(alpha, y), fd2y, rtol=1e-7, atol=1e-10)


@pytest.mark.parametrize("alpha", [1.2, 1.5, 1.9, 2.0 - 1e-6])
def test_x3_is_radial_lift_of_x(alpha):
    r = np.array([0.2, 0.8, 1.5, 3.0])
    lift = radial_lift(lambda y: x_alpha(alpha, y), r, df=lambda y: x_alpha_d1(alpha, y))
    np.testing.assert_allclose(x3_alpha(alpha, r), lift, rtol=1e-10)
    np.testing.assert_allclose(z_alpha(alpha, r), r ** (3 - alpha) * lift, rtol=1e-10)


def test_z_shape_facts():
    y = np.linspace(0.0, 5.0, 501)
    assert z_alpha(1.0, y).min() >= -1e-15
    z19 = z_alpha(1.9, y)
    assert np.count_nonzero(np.diff(np.sign(z19)) != 0) == 1
    a = 1.5
    assert z_alpha(a, 0.0) == pytest.approx(-math.sin(a * math.pi / 2) / math.pi * (a - 1) / (2 * math.pi))


def test_peak_location_is_a_critical_point_of_the_denominator():
    for alpha in (1.3, 1.7, 1.95):
        p = peak_location(alpha)
        assert x_alpha_d1(alpha, p) > 0 or p == 0.0
        assert (-math.cos(alpha * math.pi / 2)) == pytest.approx(p ** alpha)
    assert peak_location(0.8) == 0.0


def test_alpha_two_is_rejected():
    with pytest.raises(ValueError, match="closed-form"):
        x_alpha(2.0, 1.0)
    with pytest.raises(ValueError):
        x_alpha(0.0, 1.0)


def test_profile_round_trip(tmp_path):
    ys = np.linspace(0.1, 4.0, 30)
    prof = kernel_profile("X", 1.5, ys)
    path = tmp_path / "x.csv"
    prof.to_csv(path)
    back = KernelProfile.from_csv(path, 1.5, "X")
    np.testing.assert_array_equal(back.values, prof.values)
    assert back.kind is KernelKind.X


def test_profile_validation():
    with pytest.raises(ValueError):
        KernelProfile(1.5, [0.0, 1.0], [1.0, -1.0], "X")
    with pytest.raises(ValueError):
        KernelProfile(1.5, [1.0, 0.0], [1.0, 1.0], "Y")
    with pytest.raises(ValueError):
        kernel_profile("G", 1.5, [0.0, 1.0])


def test_radial_lift_of_profile():
    # Gaussian in 1D lifts to the 3D Gaussian density
    ys = np.linspace(0.0, 8.0, 4001)
    prof = KernelProfile(2.0, ys, np.exp(-ys ** 2 / 2) / math.sqrt(2 * math.pi), "G")
    r = np.array([0.0, 0.5, 1.0, 2.0])
    ref = np.exp(-r ** 2 / 2) / (2 * math.pi) ** 1.5
    np.testing.assert_allclose(radial_lift(prof, r), ref, rtol=1e-5, atol=1e-8)
    with pytest.raises(ValueError):
        radial_lift(lambda y: y, np.array([1.0]))
