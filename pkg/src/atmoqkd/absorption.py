"""Line-by-line molecular absorption cross sections with Voigt line shapes."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from atmoqkd.constants import BOLTZMANN, C2, SPEED_OF_LIGHT, T_REF
from atmoqkd.errors import ContractError, DomainError, ValidationError
from atmoqkd.lineparse import DEFAULT_WING_CUTOFF, LineList, LineRecord
from atmoqkd.spectra import SpectralGrid

SQRT_LN2 = math.sqrt(math.log(2.0))
SQRT_LN2_PI = math.sqrt(math.log(2.0) / math.pi)
PARTITION_EXPONENT = 1.5

# grid points evaluated per vectorised block in cross_section
_BLOCK = 1 << 20


@dataclass(frozen=True)
class ThermoState:
    """Temperature [K], total and absorber partial pressure [atm], molecular mass [kg]."""

    T: float
    p: float
    p_self: float
    m: float

    def __post_init__(self):
        if not self.T > 0:
            raise ValidationError(f"temperature must be positive, got {self.T}")
        if not 0 <= self.p_self <= self.p:
            raise ValidationError(
                f"need 0 <= p_self <= p, got p_self={self.p_self}, p={self.p}")
        if not self.m > 0:
            raise ValidationError(f"molecular mass must be positive, got {self.m}")


@dataclass(frozen=True, eq=False)
class CrossSection:
    grid: SpectralGrid
    sigma: np.ndarray  # cm2 molecule-1

    def __post_init__(self):
        if self.sigma.shape != (len(self.grid),):
            raise ContractError("cross section length differs from the grid")
        if np.any(self.sigma < 0):
            raise ValidationError("cross section must be non-negative")


def doppler_hwhm(nu0, T, m):
    """Doppler half width at half maximum [cm-1]."""
    nu0 = np.asarray(nu0, dtype=float)
    if np.any(nu0 <= 0) or not T > 0 or not m > 0:
        raise DomainError("doppler_hwhm needs positive nu0, T and m")
    out = nu0 / SPEED_OF_LIGHT * math.sqrt(2.0 * math.log(2.0) * BOLTZMANN * T / m)
    return float(out) if out.ndim == 0 else out


def lorentz_hwhm(line: LineRecord, state: ThermoState) -> float:
    """Pressure-broadened half width [cm-1] at the given state."""
    return ((T_REF / state.T) ** line.n_air
            * (line.gamma_air * (state.p - state.p_self) + line.gamma_self * state.p_self))


def line_strength(line: LineRecord, T: float, q: float = PARTITION_EXPONENT) -> float:
    """Line intensity scaled from 296 K to ``T``.

    The partition function is approximated as ``(T/296)**q``.
    """
    return float(_strength(np.float64(line.s_ref), np.float64(line.elower),
                           np.float64(line.nu0), T, q))


def _strength(s_ref, elower, nu0, T, q):
    if not T > 0:
        raise DomainError(f"temperature must be positive, got {T}")
    if T == T_REF:
        return np.array(s_ref, dtype=float, copy=True)
    q_ratio = (T_REF / T) ** q
    boltz = np.exp(-C2 * elower * (1.0 / T - 1.0 / T_REF))
    stim = -np.expm1(-C2 * nu0 / T) / -np.expm1(-C2 * nu0 / T_REF)
    return s_ref * q_ratio * boltz * stim


def _humlicek(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    """Real part of the Faddeeva function, Humlicek's four-region w4.

    Region II drops the Gaussian core entirely, which costs relative accuracy
    when ``y`` is tiny and ``|x|`` sits just above 5.5; ``exp(-x**2)`` is added
    back there.
    """
    t = y - 1j * x
    s = np.abs(x) + y
    out = np.empty(x.shape)

    r1 = s >= 15.0
    r2 = (s >= 5.5) & ~r1
    small = ~(r1 | r2)
    r3 = small & (y >= 0.195 * np.abs(x) - 0.176)
    r4 = small & ~r3

    if r1.any():
        tt = t[r1]
        out[r1] = (tt * 0.5641896 / (0.5 + tt * tt)).real
    if r2.any():
        tt = t[r2]
        u = tt * tt
        k = (tt * (1.410474 + u * 0.5641896) / (0.75 + u * (3.0 + u))).real
        xr, yr = x[r2], y[r2]
        tiny = yr < 1e-3
        k[tiny] += np.exp(-xr[tiny] ** 2)
        out[r2] = k
    if r3.any():
        tt = t[r3]
        num = 16.4955 + tt * (20.20933 + tt * (11.96482 + tt * (3.778987 + tt * 0.5642236)))
        den = 16.4955 + tt * (38.82363 + tt * (39.27121 + tt * (21.69274 + tt * (6.699398 + tt))))
        out[r3] = (num / den).real
    if r4.any():
        tt = t[r4]
        u = tt * tt
        num = tt * (36183.31 - u * (3321.9905 - u * (1540.787 - u * (219.0313 - u * (
            35.76683 - u * (1.320522 - u * 0.56419))))))
        den = 32066.6 - u * (24322.84 - u * (9022.228 - u * (2186.181 - u * (
            364.2191 - u * (61.57037 - u * (1.841439 - u))))))
        out[r4] = (np.exp(u) - num / den).real
    return out


def voigt(x, y):
    """Voigt function K(x, y) = Re w(x + iy).

    Accepts scalars or broadcastable arrays; ``y`` must be non-negative.
    """
    xa = np.asarray(x, dtype=float)
    ya = np.asarray(y, dtype=float)
    if np.any(ya < 0):
        raise DomainError("voigt needs y >= 0")
    xb, yb = np.broadcast_arrays(xa, ya)
    out = _humlicek(np.ascontiguousarray(xb).ravel(), np.ascontiguousarray(yb).ravel())
    out = out.reshape(xb.shape)
    return float(out) if out.ndim == 0 else out


def line_parameters(lines: LineList, state: ThermoState, q: float = PARTITION_EXPONENT):
    """Per-line strength, shifted centre, Doppler and Lorentz half widths."""
    a = lines.arrays
    strength = _strength(a["s_ref"], a["elower"], a["nu0"], state.T, q)
    centre = a["nu0"] + a["delta_air"] * state.p
    alpha_d = doppler_hwhm(a["nu0"], state.T, state.m) if len(lines) else np.zeros(0)
    gamma_l = ((T_REF / state.T) ** a["n_air"]
               * (a["gamma_air"] * (state.p - state.p_self) + a["gamma_self"] * state.p_self))
    return strength, centre, alpha_d, gamma_l


def cross_section(lines: LineList, grid: SpectralGrid, state: ThermoState,
                  wing_cutoff: float = DEFAULT_WING_CUTOFF,
                  q: float = PARTITION_EXPONENT) -> CrossSection:
    """Absorption cross section on ``grid`` [cm2 molecule-1].

    Each line contributes a Voigt profile normalised to its temperature-scaled
    strength, evaluated only at grid points within ``wing_cutoff`` of its
    pressure-shifted centre.  Lines are visited in their sorted order and
    accumulated block by block, so a given line list and grid always produce
    the same bits.
    """
    sigma = np.zeros(len(grid))
    if len(lines) == 0:
        return CrossSection(grid, sigma)
    strength, centre, alpha_d, gamma_l = line_parameters(lines, state, q)

    nu_start, dnu, n = grid.start, grid.resolution, len(grid)
    first = np.ceil((centre - wing_cutoff - nu_start) / dnu).astype(np.int64)
    last = np.floor((centre + wing_cutoff - nu_start) / dnu).astype(np.int64)
    np.clip(first, 0, None, out=first)
    np.clip(last, None, n - 1, out=last)
    active = (last >= first) & (strength > 0)
    if not active.any():
        return CrossSection(grid, sigma)
    idx = np.flatnonzero(active)
    first, last = first[idx], last[idx]
    counts = last - first + 1
    inv_ad = SQRT_LN2 / alpha_d[idx]
    amp = strength[idx] * SQRT_LN2_PI / alpha_d[idx]
    y_line = gamma_l[idx] * inv_ad
    c_line = centre[idx]

    ends = np.cumsum(counts)
    starts = ends - counts
    lo = 0
    while lo < len(idx):
        hi = int(np.searchsorted(ends, ends[lo] - counts[lo] + _BLOCK, side="right"))
        hi = max(hi, lo + 1)
        seg = slice(lo, hi)
        c = counts[seg]
        owner = np.repeat(np.arange(lo, hi), c)
        offset = np.arange(int(c.sum())) - np.repeat(starts[seg] - starts[lo], c)
        pos = first[owner] + offset
        x = (nu_start + pos * dnu - c_line[owner]) * inv_ad[owner]
        k = _humlicek(x, y_line[owner])
        sigma += np.bincount(pos, weights=amp[owner] * k, minlength=n)
        lo = hi
    np.maximum(sigma, 0.0, out=sigma)
    return CrossSection(grid, sigma)
