import io
import warnings
from importlib import resources

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from atmoqkd.atmosphere import (AtmosphereProfile, Layer, baseline_profile, column_amount,
                                number_density, profile_from_levels, saturation_vapor_pressure,
                                set_constant_rh, set_surface_temperature)
from atmoqkd.constants import BOLTZMANN
from atmoqkd.errors import DomainError, ParseError, ValidationError

# mpmath, 40 digits, Magnus form
E_S_293 = 2333.440623099357  # Pa
# mpmath: 0.5 * e_s(288) / (k_B * 288) * 1e-6
N_H2O_RH50_288 = 2.1196104715055266e17  # cm-3

TWO_LEVEL = b"# two-level fixture\n0 1.0 294 2.5e19 1e17\n1 0.887 288 2.2e19 8e16\n"


@pytest.fixture(scope="module")
def shipped():
    with resources.files("atmoqkd").joinpath("data", "mls_profile.txt").open("rb") as fh:
        return baseline_profile(fh)


def test_two_level_fixture():
    prof = baseline_profile(io.BytesIO(TWO_LEVEL), min_top_km=None)
    assert len(prof) == 1
    layer = prof.layers[0]
    assert layer.T == pytest.approx(291.0, rel=1e-15)
    assert layer.p == pytest.approx(0.9435, rel=1e-15)
    assert prof.provenance == "two-level fixture"


def test_short_profile_rejected_by_default():
    with pytest.raises(ValidationError):
        baseline_profile(io.BytesIO(TWO_LEVEL))


def test_pressure_increase_rejected():
    text = b"0 1.0 294 2.5e19 1e17\n1 1.2 288 2.2e19 8e16\n"
    with pytest.raises(ValidationError, match="line 2"):
        baseline_profile(io.BytesIO(text), min_top_km=None)


def test_non_monotone_altitude_rejected():
    text = b"0 1.0 294 2.5e19 1e17\n2 0.8 288 2.2e19 8e16\n1 0.7 280 2.0e19 5e16\n"
    with pytest.raises(ValidationError, match="line 3"):
        baseline_profile(io.BytesIO(text), min_top_km=None)


def test_malformed_level():
    with pytest.raises(ParseError) as exc:
        baseline_profile(io.BytesIO(b"0 1.0 294 2.5e19\n"), min_top_km=None)
    assert exc.value.line == 1


def test_shipped_fixture(shipped):
    assert len(shipped) == 50
    assert shipped.top == 50.0
    total = column_amount(shipped, "air").sum()
    assert total == pytest.approx(2.15e25, rel=0.05)


def test_layer_invariants():
    with pytest.raises(ValidationError):
        Layer(1.0, 1.0, 280.0, 0.9, 1e19, 0.0)
    with pytest.raises(ValidationError):
        Layer(0.0, 1.0, 280.0, 0.9, 1e19, 2e19)
    with pytest.raises(ValidationError):
        AtmosphereProfile((Layer(0.0, 1.0, 280, 0.9, 1e19, 0), Layer(2.0, 3.0, 270, 0.8, 1e19, 0)),
                          290.0, 1.0)


def test_surface_temperature_fixed_point(shipped):
    assert set_surface_temperature(shipped, shipped.surface_T) == shipped


@pytest.mark.filterwarnings("ignore::UserWarning")
def test_surface_temperature_plus_ten(shipped):
    warm = set_surface_temperature(shipped, shipped.surface_T + 10.0)
    old, new = shipped.layers[0], warm.layers[0]
    expected = old.T / (old.T + 10.0 * (1.0 - old.z_mid / 15.0))
    assert new.n_air / old.n_air == pytest.approx(expected, rel=1e-14)
    assert new.p == old.p
    assert warm.surface_T == shipped.surface_T + 10.0


def test_midpoint_rule_at_15km():
    prof = profile_from_levels([(0, 1.0, 290, 2.5e19, 1e17), (14, 0.15, 220, 5e18, 1e15),
                                (16, 0.1, 216, 3.5e18, 1e14), (50, 0.001, 270, 2e16, 1e11)])
    warm = set_surface_temperature(prof, 300.0)
    assert warm.layers[0] != prof.layers[0]
    assert warm.layers[1] == prof.layers[1]  # 14-16 km, midpoint 15
    assert warm.layers[2] == prof.layers[2]


@settings(max_examples=40, deadline=None)
@given(st.floats(263.15, 303.15))
def test_perfect_gas_invariant(shipped, T0):
    new = set_surface_temperature(shipped, T0)
    for a, b in zip(shipped.layers, new.layers):
        assert b.p == a.p
        if a.z_mid < 15.0:
            assert b.n_air * b.T == pytest.approx(a.n_air * a.T, rel=1e-12)
        else:
            assert b is a or b == a


def test_surface_temperature_warns_outside_sweep(shipped):
    with pytest.warns(UserWarning):
        set_surface_temperature(shipped, 320.0)
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        set_surface_temperature(shipped, 280.0)


def test_saturation_vapor_pressure():
    assert saturation_vapor_pressure(273.15) == pytest.approx(610.94, rel=1e-15)
    assert saturation_vapor_pressure(293.15) == pytest.approx(E_S_293, rel=1e-13)
    with pytest.raises(DomainError):
        saturation_vapor_pressure(100.0)


@given(st.floats(181.0, 328.0))
def test_saturation_vapor_pressure_increasing(T):
    assert saturation_vapor_pressure(T + 1.0) > saturation_vapor_pressure(T)


def test_constant_rh_examples(shipped):
    dry = set_constant_rh(shipped, 0.0)
    assert all(layer.n_h2o == 0.0 for layer in dry.layers if layer.z_mid < 15)
    prof = profile_from_levels([(0, 1.0, 288, 2.6e19, 0.0), (1, 1.0, 288, 2.6e19, 0.0)])
    half = set_constant_rh(prof, 0.5)
    assert half.layers[0].n_h2o == pytest.approx(N_H2O_RH50_288, rel=1e-13)
    assert N_H2O_RH50_288 == pytest.approx(0.5 * saturation_vapor_pressure(288) / (BOLTZMANN * 288) * 1e-6)
    for bad in (-0.1, 1.1):
        with pytest.raises(DomainError):
            set_constant_rh(shipped, bad)


@given(st.floats(0.0, 1.0))
def test_constant_rh_idempotent_and_upper_layers_untouched(shipped, rh):
    once = set_constant_rh(shipped, rh)
    assert set_constant_rh(once, rh) == once
    for a, b in zip(shipped.layers, once.layers):
        if a.z_mid >= 15.0:
            assert a == b


def test_modifiers_keep_invariants(shipped):
    prof = set_constant_rh(set_surface_temperature(shipped, 303.15), 1.0)
    # re-running validation on the result must not raise
    AtmosphereProfile(prof.layers, prof.surface_T, prof.surface_p)
    assert all(layer.n_h2o <= layer.n_air for layer in prof.layers)


def test_column_amount():
    prof = profile_from_levels([(0, 1.0, 288, 1e19, 1e17), (1, 1.0, 288, 1e19, 1e17)])
    assert column_amount(prof, "air")[0] == pytest.approx(1e24, rel=1e-15)
    double = profile_from_levels([(0, 1.0, 288, 2e19, 2e17), (1, 1.0, 288, 2e19, 2e17)])
    np.testing.assert_array_equal(column_amount(double, "h2o"), 2 * column_amount(prof, "h2o"))
    with pytest.raises(DomainError):
        column_amount(prof, "co2")


def test_number_density_loschmidt():
    assert number_density(1.0, 273.15) == pytest.approx(2.686780111e19, rel=1e-9)  # CODATA Loschmidt constant
