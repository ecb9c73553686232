"""Scenario configuration: dataclasses, TOML reading/writing and validation.

A scenario file is TOML.  Top-level keys describe the atmosphere and source;
``[grid]``, ``[aerosol]``, ``[lines]``, ``[windows]`` and ``[budget]`` are
optional tables and ``[[clouds]]`` is an array of tables.  See
:data:`SCHEMA_TEXT` (also printed by ``atmoqkd formats``).
"""

from __future__ import annotations

import math
import re
from dataclasses import asdict, dataclass, field, fields, replace
from pathlib import Path
from typing import Any, Mapping

import tomli
import tomli_w

from atmoqkd.errors import ParseError
from atmoqkd.scatter import AEROSOL_DEFAULTS, AEROSOL_KINDS, DEFAULT_CLOUD_THICKNESS_M, DEFAULT_RH_GROWTH
from atmoqkd.spectra import DEFAULT_RANGE_NM, DEFAULT_RESOLUTION

BUILTIN_PROFILE = "builtin:mls_profile.txt"
BUILTIN_SOLAR = "builtin:solar_bands.csv"
BUILTIN_H2O = "builtin:h2o_synthetic.par"

PRIMARY_WINDOW = (700.0, 900.0)
SECONDARY_WINDOW = (800.0, 1000.0)

# saturation formula domain, in Celsius
SURFACE_T_LIMITS_C = (-90.0, 55.0)

SCHEMA_TEXT = """\
Scenario file (TOML)
  id = "name"                         required, [A-Za-z0-9_.-]+
  description = "..."                 optional
  profile = "builtin:mls_profile.txt" level file (path or builtin:)
  solar = "builtin:solar_bands.csv"   solar band file (path or builtin:)
  rayleigh = true
  air_mass = 1.0                      zenith path = 1
  surface_temperature_c = 15.0        optional ground temperature override
  relative_humidity = 0.5             optional, constant RH below 15 km, 0..1
  [grid]     lambda_min_nm, lambda_max_nm, resolution_cm1
  [aerosol]  kind (rural|maritime|urban|tropospheric|none), beta, alpha,
             rh_growth_exponent, couple_rh (bool)
  [[clouds]] base_km, lwc_g_m3, r_eff_um, thickness_m
  [lines]    strength_floor, strict (bool), wing_cutoff_cm1
  [lines.files]  <molecule> = path     molecules: h2o, o2
  [windows]  primary_nm = [lo, hi], secondary_nm = [lo, hi]
  [budget]   diffraction_db, system_db, pns_eve_db, standard_eve_db,
             extended_limit_db
Relative paths are resolved against the scenario file's directory.
"""

_ID = re.compile(r"[A-Za-z0-9_.\-]+")


class ConfigError(ParseError):
    """Invalid scenario configuration."""


@dataclass(frozen=True)
class GridSpec:
    lambda_min_nm: float = DEFAULT_RANGE_NM[0]
    lambda_max_nm: float = DEFAULT_RANGE_NM[1]
    resolution_cm1: float = DEFAULT_RESOLUTION


@dataclass(frozen=True)
class AerosolSpec:
    kind: str = "none"
    beta: float | None = None
    alpha: float | None = None
    rh_growth_exponent: float = DEFAULT_RH_GROWTH
    couple_rh: bool = False

    @property
    def resolved(self) -> tuple[float, float]:
        beta, alpha = AEROSOL_DEFAULTS[self.kind]
        return (beta if self.beta is None else self.beta,
                alpha if self.alpha is None else self.alpha)


@dataclass(frozen=True)
class CloudSpec:
    base_km: float
    lwc_g_m3: float = 1.0
    r_eff_um: float = 10.0
    thickness_m: float = DEFAULT_CLOUD_THICKNESS_M


@dataclass(frozen=True)
class LinesSpec:
    files: tuple[tuple[str, str], ...] = (("h2o", BUILTIN_H2O),)
    strength_floor: float = 1e-28
    strict: bool = True
    wing_cutoff_cm1: float = 25.0


@dataclass(frozen=True)
class WindowSpec:
    primary_nm: tuple[float, float] = PRIMARY_WINDOW
    secondary_nm: tuple[float, float] = SECONDARY_WINDOW


@dataclass(frozen=True)
class BudgetSpec:
    diffraction_db: float = 15.0
    system_db: float = 6.5
    pns_eve_db: float = 10.0
    standard_eve_db: float = 40.0
    extended_limit_db: float = 60.0


@dataclass(frozen=True)
class ScenarioConfig:
    id: str
    description: str = ""
    profile: str = BUILTIN_PROFILE
    solar: str = BUILTIN_SOLAR
    rayleigh: bool = True
    air_mass: float = 1.0
    surface_temperature_c: float | None = None
    relative_humidity: float | None = None
    grid: GridSpec = field(default_factory=GridSpec)
    aerosol: AerosolSpec = field(default_factory=AerosolSpec)
    clouds: tuple[CloudSpec, ...] = ()
    lines: LinesSpec = field(default_factory=LinesSpec)
    windows: WindowSpec = field(default_factory=WindowSpec)
    budget: BudgetSpec = field(default_factory=BudgetSpec)
    base_dir: str = field(default="", compare=False)

    def resolve_path(self, ref: str) -> str:
        if ref.startswith("builtin:") or not self.base_dir:
            return ref
        p = Path(ref)
        return str(p if p.is_absolute() else Path(self.base_dir) / p)

    def with_resolution(self, resolution: float) -> "ScenarioConfig":
        return replace(self, grid=replace(self.grid, resolution_cm1=float(resolution)))

    def with_strict(self, strict: bool) -> "ScenarioConfig":
        return replace(self, lines=replace(self.lines, strict=strict))


def _line_of(text: str, key: str) -> int | None:
    """Best-effort 1-based line of the first assignment to ``key``."""
    pat = re.compile(rf"^\s*(\[+\s*)?{re.escape(key)}\b")
    for n, line in enumerate(text.splitlines(), start=1):
        if pat.match(line):
            return n
    return None


class _Reader:
    def __init__(self, text: str):
        self.text = text

    def fail(self, key: str, message: str):
        raise ConfigError(f"{key}: {message}", _line_of(self.text, key.split(".")[-1]))

    def take(self, table: Mapping[str, Any], key: str, kind, path: str, default=None):
        if key not in table:
            return default
        value = table[key]
        full = f"{path}{key}"
        if kind is float:
            if isinstance(value, bool) or not isinstance(value, (int, float)):
                self.fail(full, f"expected a number, got {value!r}")
            value = float(value)
            if not math.isfinite(value):
                self.fail(full, "must be finite")
            return value
        if kind is bool and not isinstance(value, bool):
            self.fail(full, f"expected true/false, got {value!r}")
        if kind is str and not isinstance(value, str):
            self.fail(full, f"expected a string, got {value!r}")
        if kind is tuple:
            if (not isinstance(value, list) or len(value) != 2
                    or not all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in value)):
                self.fail(full, f"expected [lo, hi], got {value!r}")
            lo, hi = float(value[0]), float(value[1])
            if not lo < hi:
                self.fail(full, f"window [{lo}, {hi}] is inverted")
            return (lo, hi)
        return value

    def unknown(self, table: Mapping[str, Any], allowed, path: str):
        for key in table:
            if key not in allowed:
                self.fail(f"{path}{key}", "unknown key")

    def table(self, doc: Mapping[str, Any], key: str) -> Mapping[str, Any]:
        value = doc.get(key, {})
        if not isinstance(value, dict):
            self.fail(key, "expected a table")
        return value


_TOP_KEYS = {"id", "description", "profile", "solar", "rayleigh", "air_mass",
             "surface_temperature_c", "relative_humidity",
             "grid", "aerosol", "clouds", "lines", "windows", "budget"}


def config_from_dict(doc: Mapping[str, Any], text: str = "", base_dir: str = "") -> ScenarioConfig:
    """Validate a parsed TOML document and build a :class:`ScenarioConfig`."""
    r = _Reader(text)
    r.unknown(doc, _TOP_KEYS, "")
    if "id" not in doc:
        raise ConfigError("missing required key 'id'", 1)
    sid = r.take(doc, "id", str, "")
    if not _ID.fullmatch(sid):
        r.fail("id", f"{sid!r} may only contain letters, digits, '_', '.', '-'")

    g = r.table(doc, "grid")
    r.unknown(g, {f.name for f in fields(GridSpec)}, "grid.")
    grid = GridSpec(**{k: r.take(g, k, float, "grid.") for k in g})
    if not 200.0 <= grid.lambda_min_nm < grid.lambda_max_nm <= 1100.0:
        r.fail("grid.lambda_min_nm", "need 200 <= lambda_min_nm < lambda_max_nm <= 1100")
    if not grid.resolution_cm1 > 0:
        r.fail("grid.resolution_cm1", "must be positive")

    a = r.table(doc, "aerosol")
    r.unknown(a, {f.name for f in fields(AerosolSpec)}, "aerosol.")
    kind = r.take(a, "kind", str, "aerosol.", "none")
    if kind not in AEROSOL_KINDS:
        r.fail("aerosol.kind", f"{kind!r} is not one of {', '.join(AEROSOL_KINDS)}")
    aerosol = AerosolSpec(
        kind=kind,
        beta=r.take(a, "beta", float, "aerosol."),
        alpha=r.take(a, "alpha", float, "aerosol."),
        rh_growth_exponent=r.take(a, "rh_growth_exponent", float, "aerosol.", DEFAULT_RH_GROWTH),
        couple_rh=r.take(a, "couple_rh", bool, "aerosol.", False),
    )
    if aerosol.beta is not None and aerosol.beta < 0:
        r.fail("aerosol.beta", "must be >= 0")
    if kind == "none" and aerosol.beta not in (None, 0.0):
        r.fail("aerosol.beta", "kind 'none' requires beta = 0")
    if aerosol.rh_growth_exponent < 0:
        r.fail("aerosol.rh_growth_exponent", "must be >= 0")

    raw_clouds = doc.get("clouds", [])
    if not isinstance(raw_clouds, list) or not all(isinstance(c, dict) for c in raw_clouds):
        r.fail("clouds", "expected an array of tables [[clouds]]")
    clouds = []
    for c in raw_clouds:
        r.unknown(c, {f.name for f in fields(CloudSpec)}, "clouds.")
        if "base_km" not in c:
            r.fail("clouds", "every cloud needs base_km")
        cloud = CloudSpec(**{k: r.take(c, k, float, "clouds.") for k in c})
        if not cloud.base_km > 0:
            r.fail("clouds.base_km", "cloud base altitude must be positive")
        if not cloud.lwc_g_m3 >= 0:
            r.fail("clouds.lwc_g_m3", "must be >= 0")
        if not cloud.r_eff_um > 0:
            r.fail("clouds.r_eff_um", "must be > 0")
        if not cloud.thickness_m > 0:
            r.fail("clouds.thickness_m", "must be > 0")
        clouds.append(cloud)

    ln = r.table(doc, "lines")
    r.unknown(ln, {"files", "strength_floor", "strict", "wing_cutoff_cm1"}, "lines.")
    files_tbl = ln.get("files", None)
    if files_tbl is None:
        files = LinesSpec().files
    else:
        if not isinstance(files_tbl, dict):
            r.fail("lines.files", "expected a table")
        for mol, path in files_tbl.items():
            if mol not in ("h2o", "o2"):
                r.fail(f"lines.files.{mol}", "molecule must be h2o or o2")
            if not isinstance(path, str):
                r.fail(f"lines.files.{mol}", "expected a path string")
        files = tuple(sorted(files_tbl.items()))
    lines = LinesSpec(
        files=files,
        strength_floor=r.take(ln, "strength_floor", float, "lines.", 1e-28),
        strict=r.take(ln, "strict", bool, "lines.", True),
        wing_cutoff_cm1=r.take(ln, "wing_cutoff_cm1", float, "lines.", 25.0),
    )
    if lines.strength_floor < 0:
        r.fail("lines.strength_floor", "must be >= 0")
    if not lines.wing_cutoff_cm1 > 0:
        r.fail("lines.wing_cutoff_cm1", "must be > 0")

    w = r.table(doc, "windows")
    r.unknown(w, {"primary_nm", "secondary_nm"}, "windows.")
    windows = WindowSpec(
        primary_nm=r.take(w, "primary_nm", tuple, "windows.", PRIMARY_WINDOW),
        secondary_nm=r.take(w, "secondary_nm", tuple, "windows.", SECONDARY_WINDOW),
    )

    b = r.table(doc, "budget")
    r.unknown(b, {f.name for f in fields(BudgetSpec)}, "budget.")
    budget = BudgetSpec(**{k: r.take(b, k, float, "budget.") for k in b})
    if min(budget.diffraction_db, budget.system_db) < 0:
        r.fail("budget", "fixed losses must be >= 0")
    if not budget.pns_eve_db <= budget.standard_eve_db <= budget.extended_limit_db:
        r.fail("budget", "thresholds must satisfy pns <= standard <= extended")

    t0 = r.take(doc, "surface_temperature_c", float, "")
    if t0 is not None and not SURFACE_T_LIMITS_C[0] <= t0 <= SURFACE_T_LIMITS_C[1]:
        r.fail("surface_temperature_c", f"must lie in {SURFACE_T_LIMITS_C} degC")
    rh = r.take(doc, "relative_humidity", float, "")
    if rh is not None and not 0.0 <= rh <= 1.0:
        r.fail("relative_humidity", "must lie in [0, 1]")
    if aerosol.couple_rh and kind != "none" and rh is not None and rh >= 1.0:
        r.fail("relative_humidity", "aerosol humidity growth needs relative_humidity < 1")
    air_mass = r.take(doc, "air_mass", float, "", 1.0)
    if not air_mass >= 1.0:
        r.fail("air_mass", "must be >= 1")

    return ScenarioConfig(
        id=sid,
        description=r.take(doc, "description", str, "", ""),
        profile=r.take(doc, "profile", str, "", BUILTIN_PROFILE),
        solar=r.take(doc, "solar", str, "", BUILTIN_SOLAR),
        rayleigh=r.take(doc, "rayleigh", bool, "", True),
        air_mass=air_mass,
        surface_temperature_c=t0,
        relative_humidity=rh,
        grid=grid,
        aerosol=aerosol,
        clouds=tuple(clouds),
        lines=lines,
        windows=windows,
        budget=budget,
        base_dir=base_dir,
    )


def loads(text: str, base_dir: str = "") -> ScenarioConfig:
    try:
        doc = tomli.loads(text)
    except tomli.TOMLDecodeError as exc:
        m = re.search(r"line (\d+)", str(exc))
        raise ConfigError(f"TOML syntax error: {exc}", int(m.group(1)) if m else None) from None
    return config_from_dict(doc, text, base_dir)


def load(path: str | Path) -> ScenarioConfig:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read scenario file {path}: {exc.strerror}") from None
    try:
        return loads(text, str(path.parent))
    except ConfigError as exc:
        raise ConfigError(f"{path}: {exc}") from None


def to_dict(cfg: ScenarioConfig) -> dict[str, Any]:
    """Plain-data form of a config; ``None`` fields are omitted."""
    doc: dict[str, Any] = {"id": cfg.id}
    if cfg.description:
        doc["description"] = cfg.description
    doc.update(profile=cfg.profile, solar=cfg.solar, rayleigh=cfg.rayleigh, air_mass=cfg.air_mass)
    if cfg.surface_temperature_c is not None:
        doc["surface_temperature_c"] = cfg.surface_temperature_c
    if cfg.relative_humidity is not None:
        doc["relative_humidity"] = cfg.relative_humidity
    doc["grid"] = asdict(cfg.grid)
    doc["aerosol"] = {k: v for k, v in asdict(cfg.aerosol).items() if v is not None}
    if cfg.clouds:
        doc["clouds"] = [asdict(c) for c in cfg.clouds]
    doc["lines"] = {
        "strength_floor": cfg.lines.strength_floor,
        "strict": cfg.lines.strict,
        "wing_cutoff_cm1": cfg.lines.wing_cutoff_cm1,
        "files": dict(cfg.lines.files),
    }
    doc["windows"] = {"primary_nm": list(cfg.windows.primary_nm),
                      "secondary_nm": list(cfg.windows.secondary_nm)}
    doc["budget"] = asdict(cfg.budget)
    return doc


def dumps(cfg: ScenarioConfig) -> str:
    return tomli_w.dumps(to_dict(cfg))
