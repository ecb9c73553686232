"""Layered atmosphere state and the scenario modifiers applied to it."""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, replace
from typing import IO, Sequence

import numpy as np

from atmoqkd.constants import ATM_PA, BOLTZMANN
from atmoqkd.errors import DomainError, ParseError, ValidationError

MODIFIED_TOP_KM = 15.0
MIN_TOP_KM = 50.0
SWEEP_T_RANGE = (263.15, 303.15)


@dataclass(frozen=True)
class Layer:
    """Homogeneous slab; densities in molecule cm-3, pressure in atm."""

    z_lo: float
    z_hi: float
    T: float
    p: float
    n_air: float
    n_h2o: float

    def __post_init__(self):
        if not self.z_lo < self.z_hi:
            raise ValidationError(f"layer bounds inverted: {self.z_lo} >= {self.z_hi}")
        if not self.T > 0:
            raise ValidationError(f"layer {self.z_lo}-{self.z_hi} km: T must be positive")
        if not self.p >= 0:
            raise ValidationError(f"layer {self.z_lo}-{self.z_hi} km: negative pressure")
        if not (self.n_air >= 0 and self.n_h2o >= 0):
            raise ValidationError(f"layer {self.z_lo}-{self.z_hi} km: negative density")
        if self.n_h2o > self.n_air:
            raise ValidationError(f"layer {self.z_lo}-{self.z_hi} km: n_h2o exceeds n_air")

    @property
    def z_mid(self) -> float:
        return 0.5 * (self.z_lo + self.z_hi)

    @property
    def thickness_cm(self) -> float:
        return (self.z_hi - self.z_lo) * 1e5

    @property
    def p_h2o(self) -> float:
        """Water-vapour partial pressure [atm] from the density ratio."""
        return self.p * self.n_h2o / self.n_air if self.n_air > 0 else 0.0

    @property
    def modified(self) -> bool:
        """True when the layer lies in the region the scenario modifiers touch."""
        return self.z_mid < MODIFIED_TOP_KM


@dataclass(frozen=True)
class AtmosphereProfile:
    """Ground-to-top stack of contiguous layers.

    ``surface_T`` and ``surface_p`` are the ground-level (z = 0) values the
    layers were averaged from.
    """

    layers: tuple[Layer, ...]
    surface_T: float
    surface_p: float
    provenance: str = ""

    def __post_init__(self):
        if not self.layers:
            raise ValidationError("profile has no layers")
        if self.layers[0].z_lo != 0.0:
            raise ValidationError("profile must start at 0 km")
        for k, (a, b) in enumerate(zip(self.layers, self.layers[1:])):
            if a.z_hi != b.z_lo:
                raise ValidationError(f"layers {k} and {k + 1} are not contiguous")
            if b.p > a.p:
                raise ValidationError(f"pressure increases from layer {k} to {k + 1}")
        if not self.surface_T > 0:
            raise ValidationError("surface temperature must be positive")

    def __len__(self) -> int:
        return len(self.layers)

    @property
    def top(self) -> float:
        return self.layers[-1].z_hi

    def temperature_at(self, z_km: float) -> float:
        """Temperature at altitude by linear interpolation between layer midpoints."""
        zs = [0.0] + [layer.z_mid for layer in self.layers]
        ts = [self.surface_T] + [layer.T for layer in self.layers]
        return float(np.interp(z_km, zs, ts))


def _levels_to_profile(levels, provenance: str) -> AtmosphereProfile:
    layers = []
    for (z0, p0, t0, na0, nw0), (z1, p1, t1, na1, nw1) in zip(levels, levels[1:]):
        layers.append(Layer(z0, z1, 0.5 * (t0 + t1), 0.5 * (p0 + p1),
                            0.5 * (na0 + na1), 0.5 * (nw0 + nw1)))
    return AtmosphereProfile(tuple(layers), levels[0][2], levels[0][1], provenance)


def baseline_profile(source: IO, provenance: str = "",
                     min_top_km: float | None = MIN_TOP_KM) -> AtmosphereProfile:
    """Read a level file and average adjacent levels into layers.

    Each non-comment line holds ``z_km p_atm T_K n_air_cm3 n_h2o_cm3``, ground
    level first.  Altitude must increase and pressure must not.  The top level
    must reach ``min_top_km`` (pass None for short test fixtures).
    """
    levels = []
    comments = []
    for lineno, raw in enumerate(source, start=1):
        if isinstance(raw, bytes):
            raw = raw.decode("utf-8")
        body = raw.split("#", 1)[0].strip()
        if not body:
            if raw.strip().startswith("#"):
                comments.append(raw.strip().lstrip("#").strip())
            continue
        parts = body.split()
        if len(parts) != 5:
            raise ParseError(f"expected 5 columns, got {len(parts)}", lineno)
        try:
            z, p, t, na, nw = (float(v) for v in parts)
        except ValueError:
            raise ParseError(f"non-numeric value in {body!r}", lineno) from None
        if not all(math.isfinite(v) for v in (z, p, t, na, nw)):
            raise ParseError("non-finite value", lineno)
        if t <= 0 or p < 0 or na < 0 or nw < 0:
            raise ValidationError(f"line {lineno}: level at {z} km has non-physical values")
        if levels:
            if z <= levels[-1][0]:
                raise ValidationError(
                    f"line {lineno}: altitude {z} km does not increase "
                    f"(previous level {levels[-1][0]} km)")
            if p > levels[-1][1]:
                raise ValidationError(
                    f"line {lineno}: pressure {p} atm at {z} km exceeds the level below")
        levels.append((z, p, t, na, nw))
    if len(levels) < 2:
        raise ParseError("profile needs at least two levels")
    if min_top_km is not None and levels[-1][0] < min_top_km:
        raise ValidationError(f"profile top {levels[-1][0]} km is below {min_top_km} km")
    if not provenance and comments:
        provenance = comments[0]
    return _levels_to_profile(levels, provenance)


def set_surface_temperature(profile: AtmosphereProfile, T0: float) -> AtmosphereProfile:
    """Move the ground temperature to ``T0`` and ramp the change out by 15 km.

    Layers whose midpoint lies below 15 km get ``(T0 - surface_T) * (1 - z_mid/15)``
    added to their temperature, so the profile is pinned to its own 15 km
    value and keeps its shape.  Pressure is kept and air density follows the
    perfect gas law at fixed pressure.  Water-vapour density is left as is.
    Layers at or above 15 km are returned untouched.
    """
    if not T0 > 0:
        raise DomainError(f"surface temperature must be positive, got {T0}")
    lo, hi = SWEEP_T_RANGE
    if not lo <= T0 <= hi:
        warnings.warn(f"surface temperature {T0} K is outside the {lo}-{hi} K sweep range",
                      stacklevel=2)
    dT = T0 - profile.surface_T
    if dT == 0:
        return profile
    layers = []
    for layer in profile.layers:
        if layer.modified:
            t_new = layer.T + dT * (1.0 - layer.z_mid / MODIFIED_TOP_KM)
            if not t_new > 0:
                raise DomainError(f"temperature at {layer.z_mid} km would become {t_new} K")
            n_air = layer.n_air * layer.T / t_new
            layer = replace(layer, T=t_new, n_air=n_air, n_h2o=min(layer.n_h2o, n_air))
        layers.append(layer)
    return replace(profile, layers=tuple(layers), surface_T=float(T0))


def saturation_vapor_pressure(T: float) -> float:
    """Saturation vapour pressure over liquid water [Pa], Magnus form."""
    if not 180.0 < T < 330.0:
        raise DomainError(f"saturation_vapor_pressure valid for 180 K < T < 330 K, got {T}")
    t = T - 273.15
    return 610.94 * math.exp(17.625 * t / (t + 243.04))


def set_constant_rh(profile: AtmosphereProfile, rh: float) -> AtmosphereProfile:
    """Fill the layers below 15 km with water vapour at relative humidity ``rh``."""
    if not 0.0 <= rh <= 1.0:
        raise DomainError(f"relative humidity must be in [0, 1], got {rh}")
    layers = []
    for layer in profile.layers:
        if layer.modified:
            e = rh * saturation_vapor_pressure(layer.T)
            n_h2o = e / (BOLTZMANN * layer.T) * 1e-6
            layer = replace(layer, n_h2o=min(n_h2o, layer.n_air))
        layers.append(layer)
    return replace(profile, layers=tuple(layers))


def column_amount(profile: AtmosphereProfile, species: str) -> np.ndarray:
    """Per-layer column density [molecule cm-2] of ``"air"`` or ``"h2o"``."""
    if species == "air":
        n = np.array([layer.n_air for layer in profile.layers])
    elif species == "h2o":
        n = np.array([layer.n_h2o for layer in profile.layers])
    else:
        raise DomainError(f"unknown species {species!r}; expected 'air' or 'h2o'")
    dz = np.array([layer.thickness_cm for layer in profile.layers])
    return n * dz


def number_density(p_atm: float, T: float) -> float:
    """Perfect-gas number density [molecule cm-3]."""
    return p_atm * ATM_PA / (BOLTZMANN * T) * 1e-6


def profile_from_levels(levels: Sequence[Sequence[float]], provenance: str = "") -> AtmosphereProfile:
    """Build a profile from in-memory ``(z, p, T, n_air, n_h2o)`` levels."""
    return _levels_to_profile([tuple(map(float, lv)) for lv in levels], provenance)
