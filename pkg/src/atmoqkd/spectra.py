"""Spectral axis, unit conversion and the banded solar source spectrum."""

from __future__ import annotations

import io
import math
from dataclasses import dataclass, field
from typing import IO, Iterable, Sequence

import numpy as np

from atmoqkd.errors import DomainError, ParseError, ValidationError

DEFAULT_RANGE_NM = (256.0, 1010.320)
DEFAULT_RESOLUTION = 1.0  # cm-1
MIN_NM = 200.0
MAX_NM = 1100.0


def wavelength_to_wavenumber(wavelength_nm):
    """Convert wavelength [nm] to wavenumber [cm-1]. Works on scalars and arrays."""
    arr = np.asarray(wavelength_nm, dtype=float)
    if np.any(arr <= 0) or np.any(~np.isfinite(arr)):
        raise DomainError("wavelength must be positive and finite")
    out = 1e7 / arr
    return float(out) if out.ndim == 0 else out


def wavenumber_to_wavelength(wavenumber_cm1):
    """Convert wavenumber [cm-1] to wavelength [nm]."""
    arr = np.asarray(wavenumber_cm1, dtype=float)
    if np.any(arr <= 0) or np.any(~np.isfinite(arr)):
        raise DomainError("wavenumber must be positive and finite")
    out = 1e7 / arr
    return float(out) if out.ndim == 0 else out


@dataclass(frozen=True, eq=False)
class SpectralGrid:
    """Uniform wavenumber grid.

    Points are ``start + k * resolution`` for ``k = 0 .. size-1`` and are
    stored in ascending wavenumber order.  ``range_nm`` is the requested
    wavelength range; the grid covers it from the long-wavelength end.
    """

    start: float
    resolution: float
    size: int
    range_nm: tuple[float, float]
    wavenumber: np.ndarray = field(init=False, repr=False)
    wavelength: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        nu = self.start + self.resolution * np.arange(self.size, dtype=float)
        nu.setflags(write=False)
        lam = 1e7 / nu
        lam.setflags(write=False)
        object.__setattr__(self, "wavenumber", nu)
        object.__setattr__(self, "wavelength", lam)

    def __len__(self) -> int:
        return self.size

    @property
    def key(self) -> tuple:
        return (self.start, self.resolution, self.size)

    def same_as(self, other: "SpectralGrid") -> bool:
        return self.key == other.key

    def index_of(self, wavenumber: float) -> int:
        """Nearest grid index for a wavenumber (clipped to the grid)."""
        k = int(round((wavenumber - self.start) / self.resolution))
        return min(max(k, 0), self.size - 1)


def make_grid(range_nm: Sequence[float] = DEFAULT_RANGE_NM,
              resolution: float = DEFAULT_RESOLUTION) -> SpectralGrid:
    """Build the uniform wavenumber grid spanning a wavelength range.

    Parameters
    ----------
    range_nm : (float, float)
        ``(lambda_min, lambda_max)`` in nm, with
        ``200 <= lambda_min < lambda_max <= 1100``.
    resolution : float
        Grid spacing in cm-1.

    Returns
    -------
    SpectralGrid
        Points from ``1e7/lambda_max`` upward in steps of ``resolution``,
        stopping at the last point not beyond ``1e7/lambda_min``; always at
        least two points.
    """
    lam_min, lam_max = (float(v) for v in range_nm)
    if not (MIN_NM <= lam_min < lam_max <= MAX_NM):
        raise DomainError(
            f"wavelength range must satisfy {MIN_NM} <= min < max <= {MAX_NM}, "
            f"got ({lam_min}, {lam_max})")
    if not (resolution > 0 and math.isfinite(resolution)):
        raise DomainError(f"resolution must be positive, got {resolution}")
    nu_lo = 1e7 / lam_max
    nu_hi = 1e7 / lam_min
    # tolerance keeps an exactly divisible span inclusive of its end point
    steps = math.floor((nu_hi - nu_lo) / resolution * (1 + 1e-12))
    size = max(steps + 1, 2)
    return SpectralGrid(nu_lo, float(resolution), size, (lam_min, lam_max))


@dataclass(frozen=True)
class SolarSpectrum:
    """Banded extraterrestrial irradiance.

    Each band is ``(lambda_lo_nm, lambda_hi_nm, irradiance_W_m2_nm)``; bands are
    ordered by ``lambda_lo`` and do not overlap.
    """

    bands: tuple[tuple[float, float, float], ...]
    provenance: str = ""

    def __post_init__(self):
        prev_hi = -math.inf
        for lo, hi, e0 in self.bands:
            if not lo < hi:
                raise ValidationError(f"band ({lo}, {hi}) has lambda_lo >= lambda_hi")
            if e0 < 0:
                raise ValidationError(f"band ({lo}, {hi}) has negative irradiance {e0}")
            if lo < prev_hi:
                raise ValidationError(f"band ({lo}, {hi}) overlaps the previous band")
            prev_hi = hi

    def __len__(self) -> int:
        return len(self.bands)


def _text_lines(source: IO) -> Iterable[str]:
    for raw in source:
        if isinstance(raw, bytes):
            raw = raw.decode("utf-8")
        yield raw


def load_solar_spectrum(source: IO, provenance: str = "") -> SolarSpectrum:
    """Read a solar band file.

    One band per line as ``lambda_lo_nm,lambda_hi_nm,irradiance``; ``#`` starts
    a comment.  Rows may come in any order.  Overlaps, inverted bands, negative
    irradiance and malformed rows raise :class:`ParseError` with the line number.
    """
    rows = []
    header_comments = []
    for lineno, text in enumerate(_text_lines(source), start=1):
        body = text.split("#", 1)[0].strip()
        if not body:
            if text.strip().startswith("#"):
                header_comments.append(text.strip().lstrip("#").strip())
            continue
        parts = [p.strip() for p in body.split(",")]
        if len(parts) != 3:
            raise ParseError(f"expected 3 comma-separated fields, got {len(parts)}", lineno)
        try:
            lo, hi, e0 = (float(p) for p in parts)
        except ValueError:
            raise ParseError(f"non-numeric field in {body!r}", lineno) from None
        if not all(math.isfinite(v) for v in (lo, hi, e0)):
            raise ParseError(f"non-finite field in {body!r}", lineno)
        if not lo < hi:
            raise ParseError(f"lambda_lo {lo} >= lambda_hi {hi}", lineno)
        if e0 < 0:
            raise ParseError(f"negative irradiance {e0}", lineno)
        rows.append((lo, hi, e0, lineno))
    rows.sort(key=lambda r: (r[0], r[1]))
    for prev, cur in zip(rows, rows[1:]):
        if cur[0] < prev[1]:
            raise ParseError(
                f"band ({cur[0]}, {cur[1]}) overlaps band ({prev[0]}, {prev[1]}) "
                f"from line {prev[3]}", cur[3])
    if not provenance and header_comments:
        provenance = header_comments[0]
    return SolarSpectrum(tuple((lo, hi, e0) for lo, hi, e0, _ in rows), provenance)


def parse_solar_text(text: str, provenance: str = "") -> SolarSpectrum:
    return load_solar_spectrum(io.StringIO(text), provenance)


def resample_solar(spectrum: SolarSpectrum, grid: SpectralGrid):
    """Assign every grid point the irradiance of its enclosing band.

    Bands are half-open, ``[lambda_lo, lambda_hi)``, so a point sitting on a
    shared edge goes to the upper band.  Points outside every band get 0.

    Returns
    -------
    values : ndarray
        Irradiance per grid point [W m-2 nm-1], grid order.
    gap : ndarray of bool
        True where the point fell in no band.
    """
    lam = grid.wavelength
    values = np.zeros(lam.shape)
    gap = np.ones(lam.shape, dtype=bool)
    if not spectrum.bands:
        return values, gap
    lo = np.array([b[0] for b in spectrum.bands])
    hi = np.array([b[1] for b in spectrum.bands])
    e0 = np.array([b[2] for b in spectrum.bands])
    k = np.searchsorted(lo, lam, side="right") - 1
    valid = k >= 0
    kk = np.where(valid, k, 0)
    inside = valid & (lam < hi[kk])
    values[inside] = e0[kk[inside]]
    gap[inside] = False
    return values, gap
