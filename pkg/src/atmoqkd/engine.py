"""Beer-Lambert composition of optical depths into direct-beam transmittance."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import IO, Iterable, Mapping, NamedTuple, Sequence

import numpy as np

from atmoqkd.absorption import CrossSection
from atmoqkd.errors import ContractError, DomainError, ValidationError
from atmoqkd.spectra import SpectralGrid

# band means below this count as "no transmission"
TRANSMITTANCE_FLOOR = 1e-9

SPECTRUM_COLUMNS = ("lambda_nm", "wavenumber_cm1", "transmittance",
                    "direct_irradiance_W_m2_nm", "total_od")


@dataclass(frozen=True, eq=False)
class OpticalDepthStack:
    """Named, non-negative optical-depth contributors on one grid."""

    grid: SpectralGrid
    contributors: tuple[tuple[str, np.ndarray], ...] = ()

    def __post_init__(self):
        labels = [label for label, _ in self.contributors]
        if len(set(labels)) != len(labels):
            raise ValidationError(f"duplicate contributor labels in {labels}")
        n = len(self.grid)
        for label, tau in self.contributors:
            if tau.shape != (n,):
                raise ContractError(f"contributor {label!r} has {tau.shape} points, grid has {n}")
            if np.any(tau < 0) or np.any(np.isnan(tau)):
                raise ValidationError(f"contributor {label!r} has negative or NaN optical depth")

    def add(self, label: str, tau) -> "OpticalDepthStack":
        tau = np.broadcast_to(np.asarray(tau, dtype=float), (len(self.grid),)).copy()
        return OpticalDepthStack(self.grid, self.contributors + ((label, tau),))

    def merge(self, other: "OpticalDepthStack") -> "OpticalDepthStack":
        if not self.grid.same_as(other.grid):
            raise ContractError("cannot merge stacks on different grids")
        return OpticalDepthStack(self.grid, self.contributors + other.contributors)

    @property
    def labels(self) -> tuple[str, ...]:
        return tuple(label for label, _ in self.contributors)

    def __getitem__(self, label: str) -> np.ndarray:
        for name, tau in self.contributors:
            if name == label:
                return tau
        raise KeyError(label)

    def total(self) -> np.ndarray:
        # fixed summation order (sorted labels) keeps results independent of insertion order
        out = np.zeros(len(self.grid))
        for _, tau in sorted(self.contributors, key=lambda c: c[0]):
            out += tau
        return out


@dataclass(frozen=True, eq=False)
class TransmittanceSpectrum:
    grid: SpectralGrid
    values: np.ndarray
    total_od: np.ndarray
    scenario_id: str = ""
    labels: tuple[str, ...] = ()

    def __post_init__(self):
        if np.any(self.values < 0) or np.any(self.values > 1):
            raise ValidationError("transmittance outside [0, 1]")

    @property
    def underflow(self) -> np.ndarray:
        """Points whose transmittance is indistinguishable from zero."""
        return self.values < TRANSMITTANCE_FLOOR


class BandMean(NamedTuple):
    mean: float
    count: int
    underflow: bool


def molecular_od(cross_sections: Sequence[CrossSection], columns: Sequence[float]) -> np.ndarray:
    """Sum of per-layer ``sigma * column`` [dimensionless]."""
    if len(cross_sections) != len(columns):
        raise ContractError(
            f"{len(cross_sections)} cross sections for {len(columns)} layer columns")
    if not cross_sections:
        raise ContractError("molecular_od needs at least one layer")
    grid = cross_sections[0].grid
    tau = np.zeros(len(grid))
    for xs, col in zip(cross_sections, columns):
        if not xs.grid.same_as(grid):
            raise ContractError("cross sections are on different grids")
        if col < 0:
            raise ContractError(f"negative column {col}")
        if col:
            tau += xs.sigma * col
    return tau


def total_transmittance(stack: OpticalDepthStack, scenario_id: str = "") -> TransmittanceSpectrum:
    """``exp(-sum tau)`` on every grid point."""
    tau = stack.total()
    return TransmittanceSpectrum(stack.grid, np.exp(-tau), tau, scenario_id, stack.labels)


def direct_irradiance(spectrum: TransmittanceSpectrum, source) -> np.ndarray:
    """Direct downward irradiance ``E0 * T``; ``source`` is per-point E0 on the same grid."""
    e0 = np.asarray(source, dtype=float)
    if e0.shape != spectrum.values.shape:
        raise ContractError(
            f"source has {e0.shape} points, transmittance has {spectrum.values.shape}")
    return e0 * spectrum.values


def band_mean(spectrum: TransmittanceSpectrum, window: Sequence[float]) -> BandMean:
    """Unweighted mean over grid points with wavelength in ``[lo, hi]`` nm.

    The grid is uniform in wavenumber, so this is a wavenumber-weighted mean.
    """
    lo, hi = window
    lam = spectrum.grid.wavelength
    sel = (lam >= lo) & (lam <= hi)
    count = int(sel.sum())
    if count == 0:
        raise DomainError(f"window {lo}-{hi} nm contains no grid points")
    mean = float(spectrum.values[sel].mean())
    return BandMean(mean, count, mean < TRANSMITTANCE_FLOOR)


def write_spectrum_csv(out: IO[str], spectrum: TransmittanceSpectrum, irradiance,
                       metadata: Mapping[str, object] | Iterable[tuple[str, object]] = ()) -> None:
    """Write one spectrum as CSV in ascending wavelength order.

    ``metadata`` items become ``# key: value`` header lines.
    """
    items = metadata.items() if isinstance(metadata, Mapping) else metadata
    for key, value in items:
        out.write(f"# {key}: {value}\n")
    out.write(",".join(SPECTRUM_COLUMNS) + "\n")
    grid = spectrum.grid
    irr = np.asarray(irradiance, dtype=float)
    for k in range(len(grid) - 1, -1, -1):
        out.write(f"{grid.wavelength[k]:.6f},{grid.wavenumber[k]:.6f},"
                  f"{spectrum.values[k]:.9e},{irr[k]:.9e},{spectrum.total_od[k]:.9e}\n")
