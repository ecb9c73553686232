"""Execute scenarios: profile -> modifiers -> optical depths -> statistics -> verdict."""

from __future__ import annotations

import logging
import math
from concurrent.futures import ProcessPoolExecutor
from contextlib import contextmanager
from dataclasses import dataclass, field
from importlib import resources
from typing import IO, Sequence

import numpy as np

from atmoqkd import __version__
from atmoqkd.absorption import ThermoState, cross_section
from atmoqkd.atmosphere import (AtmosphereProfile, baseline_profile, column_amount,
                                set_constant_rh, set_surface_temperature)
from atmoqkd.constants import MOLECULES, O2_VOLUME_MIXING_RATIO
from atmoqkd.engine import (BandMean, OpticalDepthStack, TransmittanceSpectrum,
                            band_mean, direct_irradiance, molecular_od, total_transmittance)
from atmoqkd.errors import AtmoQKDError, ParseError, ValidationError
from atmoqkd.lineparse import LineList, load_line_list
from atmoqkd.linkbudget import LossBudget, SecurityThresholds, Verdict, classify, loss_db
from atmoqkd.scatter import AerosolModel, CloudLayer, aerosol_od, cloud_od, rayleigh_od
from atmoqkd.scenario.config import ScenarioConfig
from atmoqkd.spectra import SolarSpectrum, SpectralGrid, load_solar_spectrum, make_grid, resample_solar

log = logging.getLogger(__name__)

MOLECULE_IDS = {name: mid for mid, (name, _) in MOLECULES.items()}


class ScenarioError(AtmoQKDError):
    """A scenario failed; ``stage`` says where and ``input_error`` whether bad input caused it."""

    def __init__(self, scenario_id: str, stage: str, cause: BaseException):
        self.scenario_id = scenario_id
        self.stage = stage
        self.cause = cause
        self.input_error = isinstance(cause, (OSError, ParseError, ValidationError))
        super().__init__(f"scenario {scenario_id!r} failed at stage {stage!r}: {cause}")


@dataclass(frozen=True, eq=False)
class MemberResult:
    """Everything computed for one scenario."""

    config: ScenarioConfig
    spectrum: TransmittanceSpectrum
    irradiance: np.ndarray
    source: np.ndarray
    source_gap: np.ndarray
    stack: OpticalDepthStack
    primary: BandMean
    secondary: BandMean
    budget: LossBudget
    verdict: Verdict
    contributor_db: dict[str, float]

    @property
    def id(self) -> str:
        return self.config.id

    @property
    def atmospheric_db(self) -> float:
        return self.budget.atmospheric_db


@dataclass(frozen=True, eq=False)
class ScenarioReport:
    name: str
    members: tuple[MemberResult, ...] = ()
    metadata: dict[str, str] = field(default_factory=dict)

    def __len__(self) -> int:
        return len(self.members)

    def __getitem__(self, member_id: str) -> MemberResult:
        for m in self.members:
            if m.id == member_id:
                return m
        raise KeyError(member_id)


def _open(ref: str) -> IO[bytes]:
    if ref.startswith("builtin:"):
        return resources.files("atmoqkd").joinpath("data", ref[len("builtin:"):]).open("rb")
    return open(ref, "rb")


class Workspace:
    """Per-process caches shared by the members of a sweep.

    Layers that no modifier touches have identical thermodynamic state across
    members, so their cross sections are computed once.
    """

    def __init__(self):
        self._profiles: dict[str, AtmosphereProfile] = {}
        self._solar: dict[str, SolarSpectrum] = {}
        self._lines: dict[tuple, LineList] = {}
        self._xsec: dict[tuple, np.ndarray] = {}

    def profile(self, ref: str) -> AtmosphereProfile:
        if ref not in self._profiles:
            with _open(ref) as fh:
                self._profiles[ref] = baseline_profile(fh, provenance=ref)
        return self._profiles[ref]

    def solar(self, ref: str) -> SolarSpectrum:
        if ref not in self._solar:
            with _open(ref) as fh:
                self._solar[ref] = load_solar_spectrum(fh)
        return self._solar[ref]

    def lines(self, ref: str, molecule_id: int, grid: SpectralGrid, floor: float,
              strict: bool, cutoff: float) -> LineList:
        key = (ref, molecule_id, grid.key, floor, strict, cutoff)
        if key not in self._lines:
            window = (grid.wavenumber[0], grid.wavenumber[-1])
            with _open(ref) as fh:
                ll = load_line_list(fh, molecule_id, window, floor, strict, cutoff)
            if ll.skipped:
                log.warning("%s: skipped %d unparsable records", ref, ll.skipped)
            self._lines[key] = ll
        return self._lines[key]

    def sigma(self, line_key: tuple, lines: LineList, grid: SpectralGrid,
              state: ThermoState, cutoff: float) -> np.ndarray:
        key = (line_key, grid.key, state, cutoff)
        if key not in self._xsec:
            self._xsec[key] = cross_section(lines, grid, state, cutoff).sigma
        return self._xsec[key]


@contextmanager
def _stage(cfg: ScenarioConfig, name: str):
    try:
        yield
    except ScenarioError:
        raise
    except Exception as exc:
        raise ScenarioError(cfg.id, name, exc) from exc


def build_profile(cfg: ScenarioConfig, ws: Workspace) -> AtmosphereProfile:
    profile = ws.profile(cfg.resolve_path(cfg.profile))
    if cfg.surface_temperature_c is not None:
        profile = set_surface_temperature(profile, cfg.surface_temperature_c + 273.15)
    if cfg.relative_humidity is not None:
        profile = set_constant_rh(profile, cfg.relative_humidity)
    return profile


def molecular_stack(cfg: ScenarioConfig, profile: AtmosphereProfile, grid: SpectralGrid,
                    ws: Workspace) -> list[tuple[str, np.ndarray]]:
    out = []
    cutoff = cfg.lines.wing_cutoff_cm1
    for name, ref in cfg.lines.files:
        mid = MOLECULE_IDS[name]
        path = cfg.resolve_path(ref)
        lines = ws.lines(path, mid, grid, cfg.lines.strength_floor, cfg.lines.strict, cutoff)
        mass = MOLECULES[mid][1]
        if name == "h2o":
            columns = column_amount(profile, "h2o")
            p_self = [layer.p_h2o for layer in profile.layers]
        else:
            columns = O2_VOLUME_MIXING_RATIO * column_amount(profile, "air")
            p_self = [O2_VOLUME_MIXING_RATIO * layer.p for layer in profile.layers]
        line_key = (path, mid, cfg.lines.strength_floor, cfg.lines.strict)
        sigmas, used = [], []
        for layer, col, ps in zip(profile.layers, columns, p_self):
            if col <= 0 or len(lines) == 0:
                continue
            state = ThermoState(layer.T, layer.p, ps, mass)
            sigma = ws.sigma(line_key, lines, grid, state, cutoff)
            sigmas.append(_XS(grid, sigma))
            used.append(col)
        tau = molecular_od(sigmas, used) if sigmas else np.zeros(len(grid))
        label = "molecular:h2o" if name == "h2o" else "molecular:other"
        out.append((label, tau))
    return out


@dataclass(frozen=True)
class _XS:
    # lightweight stand-in for CrossSection without re-validating cached arrays
    grid: SpectralGrid
    sigma: np.ndarray


def run_scenario_member(cfg: ScenarioConfig, ws: Workspace | None = None) -> MemberResult:
    """Run one scenario and return its full result."""
    ws = ws or Workspace()
    with _stage(cfg, "grid"):
        grid = make_grid((cfg.grid.lambda_min_nm, cfg.grid.lambda_max_nm), cfg.grid.resolution_cm1)
    with _stage(cfg, "profile"):
        profile = build_profile(cfg, ws)
    with _stage(cfg, "solar"):
        source, gap = resample_solar(ws.solar(cfg.resolve_path(cfg.solar)), grid)
    with _stage(cfg, "absorption"):
        contributors = molecular_stack(cfg, profile, grid, ws)
    with _stage(cfg, "scattering"):
        if cfg.rayleigh:
            contributors.append(("rayleigh", rayleigh_od(grid, profile.surface_p)))
        if cfg.aerosol.kind != "none":
            beta, alpha = cfg.aerosol.resolved
            model = AerosolModel(cfg.aerosol.kind, beta, alpha, cfg.aerosol.rh_growth_exponent)
            rh = (cfg.relative_humidity or 0.0) if cfg.aerosol.couple_rh else 0.0
            contributors.append(("aerosol", aerosol_od(model, grid, rh)))
        for k, c in enumerate(cfg.clouds, start=1):
            cloud = CloudLayer(c.base_km, c.lwc_g_m3, c.r_eff_um, c.thickness_m)
            contributors.append((f"cloud:{k}", np.full(len(grid), cloud_od(cloud))))
    with _stage(cfg, "transmittance"):
        stack = OpticalDepthStack(grid)
        for label, tau in contributors:
            # slant paths would scale every contributor by the same air mass
            stack = stack.add(label, tau * cfg.air_mass)
        spectrum = total_transmittance(stack, cfg.id)
        irradiance = direct_irradiance(spectrum, source)
    with _stage(cfg, "statistics"):
        primary = band_mean(spectrum, cfg.windows.primary_nm)
        secondary = band_mean(spectrum, cfg.windows.secondary_nm)
        contributor_db = {}
        for label, tau in stack.contributors:
            part = TransmittanceSpectrum(grid, np.exp(-tau), tau)
            contributor_db[label] = loss_db(band_mean(part, cfg.windows.primary_nm).mean)
    with _stage(cfg, "budget"):
        b = cfg.budget
        budget = LossBudget(loss_db(primary.mean), b.diffraction_db, b.system_db)
        verdict = classify(budget, SecurityThresholds(b.pns_eve_db, b.standard_eve_db,
                                                      b.extended_limit_db))
    log.info("%s: primary band mean %.6g, %.4g dB, %s", cfg.id, primary.mean,
             budget.atmospheric_db, verdict)
    return MemberResult(cfg, spectrum, irradiance, source, gap, stack, primary, secondary,
                        budget, verdict, contributor_db)


def _run_chunk(cfgs: Sequence[ScenarioConfig]) -> list[MemberResult]:
    ws = Workspace()
    return [run_scenario_member(c, ws) for c in cfgs]


def run_sweep(configs: Sequence[ScenarioConfig], name: str = "sweep", workers: int = 1,
              ws: Workspace | None = None) -> ScenarioReport:
    """Run every member and assemble the report in input order.

    With ``workers > 1`` members are split into contiguous chunks, one per
    process; results are identical to a serial run.
    """
    ids = [c.id for c in configs]
    if len(set(ids)) != len(ids):
        raise ValidationError(f"duplicate member ids in sweep {name!r}")
    if workers <= 1 or len(configs) <= 1:
        ws = ws or Workspace()
        members = [run_scenario_member(c, ws) for c in configs]
    else:
        n = min(workers, len(configs))
        size = math.ceil(len(configs) / n)
        chunks = [list(configs[i:i + size]) for i in range(0, len(configs), size)]
        with ProcessPoolExecutor(max_workers=n) as pool:
            members = [m for part in pool.map(_run_chunk, chunks) for m in part]
    return ScenarioReport(name, tuple(members), {"atmoqkd_version": __version__})


def run_scenario(cfg: ScenarioConfig, ws: Workspace | None = None) -> ScenarioReport:
    """Single-member report for one configuration."""
    return run_sweep([cfg], cfg.id, ws=ws)
