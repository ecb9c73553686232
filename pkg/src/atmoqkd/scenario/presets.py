"""The five built-in sweeps: aerosols, temperature, humidity, clouds, citydesert."""

from __future__ import annotations

from atmoqkd.errors import AtmoQKDError
from atmoqkd.scenario.config import AerosolSpec, CloudSpec, ScenarioConfig

AEROSOL_TYPES = ("rural", "maritime", "urban", "tropospheric")
SURFACE_TEMPERATURES_C = tuple(range(-10, 31, 5))
HUMIDITIES = (0.05,) + tuple(k / 10 for k in range(1, 11))
CLOUD_SETS = ((2.0, 3.0), (2.0, 3.0, 4.0), (2.0, 3.0, 4.0, 5.0))
CITY_RH = 0.9
DESERT_RH = 0.05


class UnknownPresetError(AtmoQKDError, KeyError):
    def __str__(self) -> str:
        return self.args[0]


def _aerosols():
    return [ScenarioConfig(id=f"aerosols_{kind}", description=f"{kind} aerosols, baseline atmosphere",
                           aerosol=AerosolSpec(kind=kind))
            for kind in AEROSOL_TYPES]


def _temperature():
    out = []
    for t in SURFACE_TEMPERATURES_C:
        tag = f"m{-t:02d}" if t < 0 else f"p{t:02d}"
        out.append(ScenarioConfig(id=f"temperature_{tag}C",
                                  description=f"surface temperature {t} degC, no aerosols",
                                  surface_temperature_c=float(t)))
    return out


def _humidity():
    return [ScenarioConfig(id=f"humidity_rh{round(rh * 100):03d}",
                           description=f"constant RH {round(rh * 100)}% below 15 km, no aerosols",
                           relative_humidity=rh)
            for rh in HUMIDITIES]


def _clouds():
    out = []
    for bases in CLOUD_SETS:
        tag = "-".join(f"{b:g}" for b in bases)
        out.append(ScenarioConfig(id=f"clouds_{tag}km",
                                  description=f"clouds at {tag} km, no aerosols",
                                  clouds=tuple(CloudSpec(base_km=b) for b in bases)))
    return out


def _citydesert():
    return [
        ScenarioConfig(id="citydesert_city", description="urban aerosols, 90% RH",
                       aerosol=AerosolSpec(kind="urban", couple_rh=True),
                       relative_humidity=CITY_RH),
        ScenarioConfig(id="citydesert_desert", description="no aerosols, 5% RH",
                       relative_humidity=DESERT_RH),
    ]


PRESETS = {
    "aerosols": _aerosols,
    "temperature": _temperature,
    "humidity": _humidity,
    "clouds": _clouds,
    "citydesert": _citydesert,
}


def preset(name: str) -> list[ScenarioConfig]:
    """Member configurations of a built-in sweep, in report order."""
    try:
        return PRESETS[name]()
    except KeyError:
        raise UnknownPresetError(
            f"unknown preset {name!r}; valid presets: {', '.join(PRESETS)}") from None
