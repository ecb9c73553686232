"""Continuum extinction: Rayleigh scattering, aerosols and cloud layers."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from atmoqkd.errors import DomainError, ValidationError
from atmoqkd.spectra import SpectralGrid

AEROSOL_KINDS = ("rural", "maritime", "urban", "tropospheric", "none")
REFERENCE_WAVELENGTH_NM = 550.0
WATER_DENSITY = 1000.0  # kg m-3

# (beta at 550 nm, Angstrom exponent); configuration defaults, not measurements
AEROSOL_DEFAULTS = {
    "rural": (0.31, 1.3),
    "maritime": (0.24, 0.5),
    "urban": (0.30, 1.1),
    "tropospheric": (0.33, 1.5),
    "none": (0.0, 0.0),
}
DEFAULT_RH_GROWTH = 0.6
DEFAULT_CLOUD_THICKNESS_M = 38.4


@dataclass(frozen=True)
class AerosolModel:
    kind: str
    beta: float
    alpha: float
    rh_growth_exponent: float = DEFAULT_RH_GROWTH

    def __post_init__(self):
        if self.kind not in AEROSOL_KINDS:
            raise ValidationError(f"unknown aerosol kind {self.kind!r}; expected one of {AEROSOL_KINDS}")
        if not self.beta >= 0:
            raise ValidationError(f"aerosol beta must be >= 0, got {self.beta}")
        if self.kind == "none" and self.beta != 0:
            raise ValidationError("aerosol kind 'none' requires beta = 0")
        if not self.rh_growth_exponent >= 0:
            raise ValidationError("rh_growth_exponent must be >= 0")

    @classmethod
    def default(cls, kind: str, **overrides) -> "AerosolModel":
        if kind not in AEROSOL_DEFAULTS:
            raise ValidationError(f"unknown aerosol kind {kind!r}; expected one of {AEROSOL_KINDS}")
        beta, alpha = AEROSOL_DEFAULTS[kind]
        params = {"beta": beta, "alpha": alpha, **overrides}
        return cls(kind, **params)


NO_AEROSOL = AerosolModel("none", 0.0, 0.0)


@dataclass(frozen=True)
class CloudLayer:
    """Plane cloud: base altitude [km], LWC [g m-3], r_eff [um], thickness [m]."""

    base_km: float
    lwc: float = 1.0
    r_eff_um: float = 10.0
    thickness_m: float = DEFAULT_CLOUD_THICKNESS_M

    def __post_init__(self):
        if not self.lwc >= 0:
            raise ValidationError(f"LWC must be >= 0, got {self.lwc}")
        if not self.r_eff_um > 0:
            raise ValidationError(f"r_eff must be > 0, got {self.r_eff_um}")
        if not self.thickness_m > 0:
            raise ValidationError(f"cloud thickness must be > 0, got {self.thickness_m}")


def rayleigh_od(grid: SpectralGrid, p_surface: float) -> np.ndarray:
    """Whole-column Rayleigh optical depth, scaled by surface pressure in atm."""
    if not p_surface >= 0:
        raise DomainError(f"surface pressure must be >= 0, got {p_surface}")
    lam = grid.wavelength * 1e-3
    inv2 = lam ** -2
    tau = 0.008569 * inv2 * inv2 * (1.0 + 0.0113 * inv2 + 0.00013 * inv2 * inv2)
    return tau * p_surface


def aerosol_od(model: AerosolModel, grid: SpectralGrid, rh: float = 0.0) -> np.ndarray:
    """Angstrom-law aerosol optical depth with hygroscopic growth ``(1-rh)**-gamma``."""
    if not 0.0 <= rh < 1.0:
        raise DomainError(f"aerosol humidity growth needs 0 <= rh < 1, got {rh}")
    if model.kind == "none" or model.beta == 0:
        return np.zeros(len(grid))
    growth = (1.0 - rh) ** -model.rh_growth_exponent
    return model.beta * (grid.wavelength / REFERENCE_WAVELENGTH_NM) ** -model.alpha * growth


def cloud_od(cloud: CloudLayer) -> float:
    """Gray optical depth of a cloud with extinction efficiency 2."""
    lwp = cloud.lwc * 1e-3 * cloud.thickness_m  # kg m-2
    return 3.0 * lwp / (2.0 * WATER_DENSITY * cloud.r_eff_um * 1e-6)
