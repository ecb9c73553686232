import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy import integrate

import oracles
from atmoqkd.absorption import (CrossSection, ThermoState, cross_section, doppler_hwhm,
                                line_strength, lorentz_hwhm, voigt)
from atmoqkd.constants import MOLECULES, T_REF
from atmoqkd.errors import DomainError, ValidationError
from atmoqkd.lineparse import LineList
from atmoqkd.spectra import make_grid
from helpers import make_record

M_H2O = MOLECULES[1][1]

# mpmath, 40 digits: formula with c = 299792458, k_B = 1.380649e-23
DOPPLER_H2O_12500_296 = 0.018146644394674583
# mpmath, 40 digits: S_ref = 1e-24, E'' = 100, nu0 = 12257, T = 250, q = 1.5
STRENGTH_FIXTURE_250K = 1.1781086522733706e-24

# 20 x values (including the region-boundary neighbourhoods) by 10 y values
LATTICE_X = (0.0, 0.3, 1.0, 2.0, 3.0, 3.9, 5.0, 5.45, 5.5, 5.6, 6.5, 8.0, 10.0, 14.9,
             15.1, 30.0, 100.0, 300.0, 700.0, 1000.0)
LATTICE_Y = tuple(np.logspace(-8, 3, 10))


def fine_grid(centre, half_width, resolution):
    return make_grid((1e7 / (centre + half_width), 1e7 / (centre - half_width)), resolution)


def test_doppler_frozen_value():
    assert doppler_hwhm(12500.0, 296.0, 2.991e-26) == pytest.approx(DOPPLER_H2O_12500_296, rel=1e-13)
    assert oracles.doppler_hwhm(12500, 296, 2.991e-26) == pytest.approx(DOPPLER_H2O_12500_296, rel=1e-15)


def test_doppler_scaling():
    a = doppler_hwhm(12500.0, 296.0, M_H2O)
    assert doppler_hwhm(25000.0, 296.0, M_H2O) == pytest.approx(2 * a, rel=1e-14)
    assert doppler_hwhm(12500.0, 4 * 296.0, M_H2O) == pytest.approx(2 * a, rel=1e-14)


@pytest.mark.parametrize("args", [(0.0, 296.0, M_H2O), (12500.0, 0.0, M_H2O), (12500.0, 296.0, -1.0)])
def test_doppler_domain(args):
    with pytest.raises(DomainError):
        doppler_hwhm(*args)


def test_lorentz_examples():
    line = make_record(gamma_air=0.07, gamma_self=0.4, n_air=1.0)
    assert lorentz_hwhm(line, ThermoState(296.0, 0.0, 0.0, M_H2O)) == 0.0
    assert lorentz_hwhm(line, ThermoState(T_REF, 1.0, 0.0, M_H2O)) == 0.07
    assert lorentz_hwhm(line, ThermoState(2 * T_REF, 1.0, 0.0, M_H2O)) == pytest.approx(0.035, rel=1e-15)
    mixed = lorentz_hwhm(line, ThermoState(T_REF, 1.0, 0.25, M_H2O))
    assert mixed == pytest.approx(0.07 * 0.75 + 0.4 * 0.25, rel=1e-15)


def test_thermo_state_invariants():
    with pytest.raises(ValidationError):
        ThermoState(0.0, 1.0, 0.0, M_H2O)
    with pytest.raises(ValidationError):
        ThermoState(296.0, 1.0, 1.5, M_H2O)


def test_strength_identity_at_reference():
    line = make_record(s_ref=3.7e-23)
    assert line_strength(line, T_REF) == 3.7e-23


def test_strength_frozen_value():
    line = make_record()
    assert line_strength(line, 250.0) == pytest.approx(STRENGTH_FIXTURE_250K, rel=1e-12)
    assert oracles.line_strength(1e-24, 100, 12257, 250) == pytest.approx(STRENGTH_FIXTURE_250K, rel=1e-15)


def test_strength_reduces_to_partition_ratio():
    line = make_record(elower=0.0, nu0=1e6)
    assert line_strength(line, 250.0) == pytest.approx((T_REF / 250.0) ** 1.5 * line.s_ref, rel=1e-14)


@settings(max_examples=50, deadline=None)
@given(st.floats(150.0, 350.0), st.floats(0.0, 5000.0), st.floats(9000.0, 40000.0))
def test_strength_matches_oracle(T, elower, nu0):
    line = make_record(elower=elower, nu0=nu0)
    assert line_strength(line, T) == pytest.approx(oracles.line_strength(1e-24, elower, nu0, T), rel=1e-11)


def test_voigt_at_origin():
    assert voigt(0.0, 0.0) == pytest.approx(1.0, abs=1e-6)
    assert isinstance(voigt(0.5, 1.0), float)


def test_voigt_negative_y():
    with pytest.raises(DomainError):
        voigt(1.0, -1e-3)


@given(st.floats(-1e3, 1e3), st.floats(1e-8, 1e3))
def test_voigt_symmetric(x, y):
    assert voigt(x, y) == voigt(-x, y)


def voigt_lattice_errors():
    """Largest relative error of voigt() over the 200-point lattice."""
    worst = 0.0
    for y in LATTICE_Y:
        for x in LATTICE_X:
            ref = oracles.voigt_quadrature(x, y)
            worst = max(worst, abs(voigt(x, y) - ref) / ref)
    return worst


def test_voigt_lattice_against_quadrature():
    assert len(LATTICE_X) * len(LATTICE_Y) == 200
    assert voigt_lattice_errors() <= 1e-4


def test_quadrature_oracle_self_check():
    # Lorentz and Gauss limits of the oracle itself
    assert oracles.voigt_quadrature(2.0, 0.0) == pytest.approx(math.exp(-4.0), rel=1e-12)
    y = 1e3
    assert oracles.voigt_quadrature(0.0, y) == pytest.approx(1 / (math.sqrt(math.pi) * y), rel=1e-6)


def voigt_area(y):
    f = lambda x: voigt(x, y)  # noqa: E731
    near, _ = integrate.quad(f, 0.0, 50.0, points=[1.0, 3.0, 5.5, 15.0], limit=500)
    far, _ = integrate.quad(f, 50.0, math.inf, limit=500)
    return 2.0 * (near + far)


@pytest.mark.parametrize("y", [0.1, 1.0, 10.0])
def test_voigt_normalisation(y):
    assert voigt_area(y) == pytest.approx(math.sqrt(math.pi), abs=1e-3)


def test_empty_line_list_gives_zero():
    g = make_grid((700, 900), 1.0)
    xs = cross_section(LineList(()), g, ThermoState(296.0, 1.0, 0.01, M_H2O))
    assert xs.sigma.shape == (len(g),) and not xs.sigma.any()


def test_identical_lines_double():
    g = fine_grid(12257.0, 30.0, 0.01)
    state = ThermoState(280.0, 0.8, 0.01, M_H2O)
    one = cross_section(LineList.from_records([make_record()]), g, state).sigma
    two = cross_section(LineList.from_records([make_record(), make_record()]), g, state).sigma
    assert np.array_equal(two, 2 * one)


@settings(max_examples=20, deadline=None)
@given(st.lists(st.floats(12200.0, 12300.0), min_size=1, max_size=6),
       st.lists(st.floats(12200.0, 12300.0), min_size=1, max_size=6))
def test_additivity(a, b):
    g = fine_grid(12250.0, 80.0, 0.05)
    state = ThermoState(270.0, 0.7, 0.005, M_H2O)
    la = LineList.from_records(make_record(nu0=v) for v in a)
    lb = LineList.from_records(make_record(nu0=v, s_ref=2e-25) for v in b)
    both = cross_section(la + lb, g, state).sigma
    parts = cross_section(la, g, state).sigma + cross_section(lb, g, state).sigma
    np.testing.assert_allclose(both, parts, rtol=1e-12, atol=0)


def test_wing_cutoff_respected():
    g = fine_grid(12257.0, 60.0, 0.1)
    sigma = cross_section(LineList.from_records([make_record()]), g,
                          ThermoState(296.0, 1.0, 0.0, M_H2O), wing_cutoff=25.0).sigma
    shifted = 12257.0 - 0.002
    dist = np.abs(g.wavenumber - shifted)
    assert not sigma[dist > 25.0 + 1e-9].any()
    assert np.all(sigma[dist < 24.9] > 0)


def single_line_mass(T, p, p_self, resolution=0.001, cutoff=25.0):
    line = make_record()
    state = ThermoState(T, p, p_self, M_H2O)
    g = fine_grid(line.nu0, cutoff + 5.0, resolution)
    sigma = cross_section(LineList.from_records([line]), g, state, wing_cutoff=cutoff).sigma
    area = float(sigma.sum() * resolution)
    alpha_d = doppler_hwhm(line.nu0, T, M_H2O)
    y = math.sqrt(math.log(2)) * lorentz_hwhm(line, state) / alpha_d
    x_cut = math.sqrt(math.log(2)) * cutoff / alpha_d
    inside = oracles.voigt_integral(y, x_cut) / math.sqrt(math.pi)
    return area, line_strength(line, T) * inside, line_strength(line, T)


@pytest.mark.parametrize("T,p,p_self", [(296.0, 1.0, 0.01), (250.0, 0.3, 0.0), (220.0, 0.05, 0.0)])
def test_single_line_mass(T, p, p_self):
    area, expected, total = single_line_mass(T, p, p_self)
    assert area == pytest.approx(expected, rel=0.02)
    assert area <= total


def test_pressure_shift_moves_peak():
    g = fine_grid(12257.0, 5.0, 0.001)
    state = ThermoState(296.0, 1.0, 0.0, M_H2O)
    base = cross_section(LineList.from_records([make_record(delta_air=0.0)]), g, state).sigma
    moved = cross_section(LineList.from_records([make_record(delta_air=0.2)]), g, state).sigma
    assert int(np.argmax(moved)) - int(np.argmax(base)) == 200


def test_doppler_limit():
    line = make_record(delta_air=0.0)
    T = 260.0
    state = ThermoState(T, 1e-9, 0.0, M_H2O)
    g = fine_grid(line.nu0, 2.0, 0.001)
    sigma = cross_section(LineList.from_records([line]), g, state).sigma
    alpha_d = doppler_hwhm(line.nu0, T, M_H2O)
    k0 = g.index_of(line.nu0)
    idx = [k0 + d for d in (-30, -12, 0, 7, 25)]
    ref = line_strength(line, T) * oracles.gaussian_profile(g.wavenumber[idx] - line.nu0, alpha_d)
    np.testing.assert_allclose(sigma[idx], ref, rtol=1e-3)


def test_cross_section_contract():
    g = make_grid((700, 900), 10.0)
    with pytest.raises(Exception):
        CrossSection(g, np.zeros(3))
    with pytest.raises(ValidationError):
        CrossSection(g, -np.ones(len(g)))
