import math

import numpy as np
import pytest

from fracwave.green import green1d, green3d_isotropic
from fracwave.oracle import (
    EnergySeries,
    FieldGrid,
    MBKind,
    ResolutionError,
    SpectralMeasure,
    energy_check,
    ifft_green,
    mellin_barnes_eval,
)
from fracwave.specfun import mittag_leffler
from fracwave.symbols import FracParams
from fracwave.wright import m_wright, n_wright


def _q(alpha):
    return lambda k: -np.abs(k) ** alpha


def test_grid_validation():
    g = FieldGrid.empty(64, 8.0)
    assert g.n == 64 and g.x[32] == 0.0
    assert g.k_nyquist == pytest.approx(math.pi / g.spacing)
    with pytest.raises(ValueError):
        FieldGrid.empty(48, 8.0)
    with pytest.raises(ValueError):
        FieldGrid(0.125, 8.0, 2, np.zeros((64, 64)))
    with pytest.raises(ValueError):
        FieldGrid(0.125, 8.0, 1, np.zeros(10))
    with pytest.raises(ValueError):
        g.values[0] = 1.0


def test_unresolved_spectrum_is_reported():
    with pytest.raises(ResolutionError):
        ifft_green(_q(1.5), 1.2, 1.0, FieldGrid.empty(1024, 64.0), "G")


@pytest.mark.parametrize("which", ["G", "H"])
def test_oracle_matches_mellin_1d(which):
    grid = FieldGrid.empty(65536, 400.0)
    field = ifft_green(_q(1.6), 1.2, 1.0, grid, which, tail=(1.6, 1.0))
    sel = (grid.x >= 0.1) & (grid.x <= 4.0)
    ref = green1d(FracParams(1.2, 1.6), 1.0, grid.x[sel], which)
    assert np.max(np.abs(field.values[sel] - ref)) < 1e-6


def test_oracle_matches_mellin_3d_radial():
    grid = FieldGrid.empty(65536, 400.0)
    field = ifft_green(_q(1.9), 1.3, 1.0, grid, "G", tail=(1.9, 1.0), radial_lift=True)
    sel = (grid.x >= 0.1) & (grid.x <= 4.0)
    ref = green3d_isotropic(FracParams(1.3, 1.9), 1.0, grid.x[sel])
    assert np.max(np.abs(field.values[sel] - ref)) < 1e-8
    assert np.isnan(field.values[grid.n // 2])


@pytest.mark.parametrize("dim,n,extent", [(1, 4096, 32.0), (3, 64, 16.0)])
def test_mollified_field_carries_unit_mass(dim, n, extent):
    grid = FieldGrid.empty(n, extent, dim)
    q = _q(1.5) if dim == 1 else (lambda k: -np.linalg.norm(k, axis=-1) ** 1.5)
    field = ifft_green(q, 1.3, 1.0, grid, "G", epsilon=1.0)
    assert field.mass() == pytest.approx(1.0, abs=1e-12)
    h = ifft_green(q, 1.3, 2.0, grid, "H", epsilon=1.0)
    assert h.mass() == pytest.approx(2.0, abs=1e-12)


def test_density_and_coefficient():
    grid = FieldGrid.empty(4096, 64.0)
    a = ifft_green(_q(1.5), 1.3, 1.0, grid, "G", rho=2.0, epsilon=0.5)
    b = ifft_green(lambda k: 0.5 * _q(1.5)(k), 1.3, 1.0, grid, "G", epsilon=0.5)
    np.testing.assert_allclose(a.values, b.values, atol=1e-15)


@pytest.mark.parametrize("beta", [0.6, 1.2, 1.5, 1.9])
def test_mellin_barnes_mittag_leffler(beta):
    for z in (0.3, 2.0, 6.0):
        assert mellin_barnes_eval(MBKind.E_BETA, beta, z) == pytest.approx(
            mittag_leffler(beta, 1.0, -z), abs=1e-12)
        assert mellin_barnes_eval("E_beta2", beta, z) == pytest.approx(
            mittag_leffler(beta, 2.0, -z), abs=1e-12)


@pytest.mark.parametrize("gamma", [0.3, 0.5, 2.0 / 3.0, 0.8])
def test_mellin_barnes_wright(gamma):
    for z in (0.2, 1.0, 2.5):
        assert mellin_barnes_eval("M_gamma", gamma, z) == pytest.approx(m_wright(gamma, z), abs=1e-12)
        assert mellin_barnes_eval("N_gamma", gamma, z) == pytest.approx(n_wright(gamma, z), abs=1e-12)
    with pytest.raises(ValueError):
        mellin_barnes_eval("M_gamma", gamma, 0.0)


def test_spectral_measure():
    sm = SpectralMeasure.build(1.5, 64.0)
    dens = math.sin(1.5 * math.pi / 2) / math.pi
    assert sm.weights.sum() == pytest.approx(2 * dens * 64.0 ** 0.5 / 0.5, rel=1e-9)
    plain, osc = sm.tail_moments(0.0)
    assert plain == osc
    with pytest.raises(ValueError):
        SpectralMeasure.build(2.0, 64.0)


def test_energy_conserved_for_the_classical_wave():
    grid = FieldGrid.empty(1024, 32.0)
    series, drift = energy_check(FracParams(2.0, 2.0), _q(2.0), grid, 1.0, 50)
    assert drift < 1e-12
    assert isinstance(series, EnergySeries)
    np.testing.assert_allclose(series.total, series.kinetic + series.stored)
    assert series.to_csv().splitlines()[0] == "t,kinetic,stored,total"


def test_energy_balance_fractional():
    grid = FieldGrid.empty(1024, 32.0)
    series, drift = energy_check(FracParams(1.5, 1.5), _q(1.5), grid, 1.0, 100)
    assert drift < 1e-3
    assert np.all(series.stored >= 0)
    assert series.kinetic[-1] < series.kinetic[0]


@pytest.mark.parametrize("t", [0.5, 2.5])
def test_oracle_confirms_time_scaling(t):
    # the oracle applies t inside the spectrum, independent of the similarity scaling
    grid = FieldGrid.empty(65536, 400.0)
    for which in ("G", "H"):
        field = ifft_green(_q(1.9), 1.3, t, grid, which, tail=(1.9, 1.0))
        sel = (grid.x >= 0.1) & (grid.x <= 4.0)
        ref = green1d(FracParams(1.3, 1.9), t, grid.x[sel], which)
        assert np.max(np.abs(field.values[sel] - ref)) < 1e-6
