import io

import numpy as np
import pytest
from hypothesis import given, strategies as st

from atmoqkd.errors import DomainError, ParseError
from atmoqkd.spectra import (SolarSpectrum, load_solar_spectrum, make_grid, parse_solar_text,
                             resample_solar, wavelength_to_wavenumber, wavenumber_to_wavelength)

# 1e7/1010.320 and 1e7/256 evaluated with mpmath at 40 digits
DEFAULT_NU_LO = 9897.854145221316
DEFAULT_NU_HI = 39062.5
DEFAULT_POINTS = 29165


def test_default_grid_bounds_and_count():
    g = make_grid((256, 1010.320), 1.0)
    assert g.wavenumber[0] == pytest.approx(DEFAULT_NU_LO, rel=1e-15)
    assert len(g) == DEFAULT_POINTS
    assert g.wavenumber[-1] <= DEFAULT_NU_HI
    assert DEFAULT_NU_HI - g.wavenumber[-1] < 1.0
    assert np.all(np.diff(g.wavenumber) > 0)


def test_narrow_grid_has_two_points():
    g = make_grid((500, 500.1), 5.0)
    assert len(g) >= 2


@pytest.mark.parametrize("bounds", [(1010.32, 256), (500, 500), (150, 900), (300, 1200)])
def test_bad_bounds(bounds):
    with pytest.raises(DomainError):
        make_grid(bounds, 1.0)


@pytest.mark.parametrize("res", [0.0, -1.0, float("nan")])
def test_bad_resolution(res):
    with pytest.raises(DomainError):
        make_grid((400, 800), res)


def test_grid_is_deterministic():
    a, b = make_grid((300, 900), 0.7), make_grid((300, 900), 0.7)
    assert a.same_as(b)
    assert a.wavenumber.tobytes() == b.wavenumber.tobytes()


def test_grid_arrays_read_only():
    g = make_grid((400, 800), 10.0)
    with pytest.raises(ValueError):
        g.wavenumber[0] = 1.0


def test_conversions():
    assert wavelength_to_wavenumber(1000.0) == 10000.0
    assert wavelength_to_wavenumber(256.0) == 39062.5
    assert wavenumber_to_wavelength(10000.0) == 1000.0
    for bad in (0.0, -5.0):
        with pytest.raises(DomainError):
            wavelength_to_wavenumber(bad)
        with pytest.raises(DomainError):
            wavenumber_to_wavelength(bad)


@given(st.floats(min_value=1.0, max_value=1e6))
def test_conversion_round_trip(lam):
    assert wavenumber_to_wavelength(wavelength_to_wavenumber(lam)) == pytest.approx(lam, rel=1e-12)


def test_two_band_file():
    s = load_solar_spectrum(io.BytesIO(b"250,300,0.5\n300,350,0.9\n"))
    assert len(s.bands) == 2
    assert [b[0] for b in s.bands] == [250.0, 300.0]


def test_out_of_order_rows_sorted():
    a = parse_solar_text("250,300,0.5\n300,350,0.9\n")
    b = parse_solar_text("# reversed\n300,350,0.9\n250,300,0.5\n")
    assert a.bands == b.bands


@pytest.mark.parametrize("text,line", [
    ("300,250,0.5\n", 1),
    ("250,300,0.5\n250,300\n", 2),
    ("250,300,-1\n", 1),
    ("250,300,abc\n", 1),
    ("250,300,0.5\n290,350,0.9\n", 2),
])
def test_malformed_rows_name_the_line(text, line):
    with pytest.raises(ParseError) as exc:
        parse_solar_text(text)
    assert exc.value.line == line
    assert f"line {line}" in str(exc.value)


def test_single_band_fills_default_grid():
    g = make_grid()
    values, gap = resample_solar(parse_solar_text("256,1011,1.0\n"), g)
    assert np.all(values == 1.0)
    assert not gap.any()


def test_half_open_band_edge():
    # the grid starts at 1e7/1000 = 10000 cm-1, so 16000 cm-1 (625 nm) is a point
    g = make_grid((600, 1000), 500.0)
    lam = g.wavelength
    k = int(np.argmin(np.abs(lam - 625.0)))
    assert lam[k] == 625.0
    s = parse_solar_text("600,625,1.0\n625,1000,2.0\n")
    values, _ = resample_solar(s, g)
    assert values[k] == 2.0


def test_gap_points_are_zero_and_flagged():
    g = make_grid((250, 300), 50.0)
    values, gap = resample_solar(parse_solar_text("256,400,1.0\n"), g)
    below = g.wavelength < 256
    assert below.any()
    assert np.all(values[below] == 0.0) and np.all(gap[below])
    assert np.all(values[~below] == 1.0) and not gap[~below].any()


@given(st.lists(st.tuples(st.floats(0.1, 20.0), st.floats(0.0, 3.0)), min_size=1, max_size=20))
def test_resampled_irradiance_non_negative(widths):
    rows, lo = [], 200.0
    for w, e in widths:
        rows.append((lo, lo + w, e))
        lo += w
    s = SolarSpectrum(tuple(rows))
    values, _ = resample_solar(s, make_grid((200, 1100), 50.0))
    assert np.all(values >= 0)
