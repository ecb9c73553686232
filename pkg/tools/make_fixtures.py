"""Regenerate the data files shipped in ``atmoqkd/data``.

    python tools/make_fixtures.py [outdir]

Everything is deterministic: rerunning reproduces the committed files byte
for byte (``tests/test_fixtures.py`` checks this).
"""

from __future__ import annotations

import math
import sys
from pathlib import Path

import numpy as np

from atmoqkd.constants import ATM_PA, BOLTZMANN
from atmoqkd.lineparse import LineRecord, format_record

DATA = Path(__file__).resolve().parents[1] / "src" / "atmoqkd" / "data"

# Midlatitude-summer-like levels: z [km], p [hPa], T [K], H2O [ppmv].
# Representative values with the usual AFGL shape; not a redistribution.
MLS = [
    (0, 1013.0, 294.2, 1.876e4), (1, 902.0, 289.7, 1.378e4), (2, 802.0, 285.2, 9.680e3),
    (3, 710.0, 279.2, 5.984e3), (4, 628.0, 273.2, 3.813e3), (5, 554.0, 267.2, 2.225e3),
    (6, 487.0, 261.2, 1.510e3), (7, 426.0, 254.7, 1.020e3), (8, 372.0, 248.2, 6.464e2),
    (9, 324.0, 241.7, 4.129e2), (10, 281.0, 235.3, 2.472e2), (11, 243.0, 228.8, 9.556e1),
    (12, 209.0, 222.3, 2.944e1), (13, 179.0, 215.8, 8.0), (14, 153.0, 215.7, 5.0),
    (15, 130.0, 215.7, 3.4), (16, 111.0, 215.7, 3.3), (17, 95.0, 215.7, 3.2),
    (18, 81.2, 216.8, 3.15), (19, 69.5, 217.9, 3.2), (20, 59.5, 219.2, 3.3),
    (21, 51.0, 220.4, 3.45), (22, 43.7, 221.6, 3.6), (23, 37.6, 222.8, 3.85),
    (24, 32.2, 223.9, 4.0), (25, 27.7, 225.1, 4.2), (27.5, 19.1, 228.45, 4.45),
    (30, 13.2, 233.7, 4.7), (32.5, 9.3, 239.0, 4.85), (35, 6.52, 245.2, 4.95),
    (37.5, 4.64, 251.3, 5.0), (40, 3.33, 257.5, 5.1), (42.5, 2.43, 263.7, 5.3),
    (45, 1.76, 269.9, 5.45), (47.5, 1.29, 275.2, 5.5), (50, 0.951, 275.7, 5.5),
]

# H2O polyads in the visible/near-IR: centre [cm-1], summed intensity, line count, spread [cm-1]
H2O_BANDS = [
    (10600.0, 6.0e-21, 1600, 260.0),
    (11250.0, 6.0e-22, 500, 220.0),
    (12150.0, 1.8e-21, 900, 240.0),
    (13850.0, 1.2e-21, 900, 250.0),
    (15300.0, 6.0e-23, 500, 230.0),
    (16850.0, 3.0e-23, 450, 230.0),
    (18400.0, 4.0e-24, 300, 220.0),
]
SEED = 20060530


def write_profile(path: Path) -> None:
    z = np.array([r[0] for r in MLS])
    logp = np.log([r[1] for r in MLS])
    t = np.array([r[2] for r in MLS])
    logw = np.log([r[3] for r in MLS])
    out = ["# midlatitude-summer-like reference levels (synthetic, AFGL-shaped)",
           "# z_km p_atm T_K n_air_cm3 n_h2o_cm3"]
    for zk in np.arange(0.0, 51.0, 1.0):
        p_atm = math.exp(np.interp(zk, z, logp)) * 100.0 / ATM_PA
        tk = float(np.interp(zk, z, t))
        vmr = math.exp(np.interp(zk, z, logw)) * 1e-6
        n_air = p_atm * ATM_PA / (BOLTZMANN * tk) * 1e-6
        out.append(f"{zk:5.1f} {p_atm:.6e} {tk:7.2f} {n_air:.6e} {vmr * n_air:.6e}")
    path.write_text("\n".join(out) + "\n", encoding="utf-8")


def write_solar(path: Path) -> None:
    h, c, k = 6.62607015e-34, 299792458.0, 1.380649e-23
    t_sun = 5778.0
    dilution = (6.957e8 / 1.495978707e11) ** 2
    edges = np.arange(250.0, 1105.0, 5.0)
    out = ["# synthetic 5778 K blackbody at 1 AU, 5 nm band means [W m-2 nm-1]"]
    for lo, hi in zip(edges[:-1], edges[1:]):
        lam = np.linspace(lo, hi, 51) * 1e-9
        b = 2 * h * c ** 2 / lam ** 5 / np.expm1(h * c / (lam * k * t_sun))
        e = math.pi * dilution * float(np.trapezoid(b, lam)) / ((hi - lo) * 1e-9) * 1e-9
        out.append(f"{lo:.1f},{hi:.1f},{e:.6f}")
    path.write_text("\n".join(out) + "\n", encoding="utf-8")


def synthetic_h2o_lines(seed: int = SEED) -> list[LineRecord]:
    rng = np.random.default_rng(seed)
    tail = " " * 60 + "000000" + " 0 0 0 0 0 0" + " " + "    1.0    1.0"
    records = []
    for centre, total, count, spread in H2O_BANDS:
        # P and R branches: two humps either side of a weak Q region
        side = rng.choice([-1.0, 1.0], size=count)
        offset = side * np.abs(rng.gamma(2.2, spread / 2.2, size=count))
        weight = rng.lognormal(0.0, 1.6, size=count) * np.exp(-0.5 * (offset / spread) ** 2)
        strength = total * weight / weight.sum()
        elower = np.clip(np.abs(offset) / spread * 450.0 + rng.uniform(0, 350, count), 0, 4000)
        for k in range(count):
            s = float(f"{strength[k]:.3e}")
            if s < 1e-27:
                continue
            records.append(LineRecord(
                molecule_id=1, isotopologue_id=1,
                nu0=round(float(centre + offset[k]), 6),
                s_ref=s,
                gamma_air=round(float(rng.uniform(0.03, 0.10)), 4),
                gamma_self=round(float(rng.uniform(0.20, 0.50)), 3),
                elower=round(float(elower[k]), 4),
                n_air=round(float(rng.uniform(0.45, 0.80)), 2),
                delta_air=round(float(rng.uniform(-0.020, 0.004)), 6),
                einstein_a=f"{s * 1e24:10.3E}",
                tail=tail,
            ))
    records.sort(key=lambda r: r.nu0)
    return records


def write_lines(path: Path) -> None:
    rows = [format_record(r) for r in synthetic_h2o_lines()]
    path.write_text("\n".join(rows) + "\n", encoding="ascii")


def main(argv: list[str]) -> int:
    out = Path(argv[1]) if len(argv) > 1 else DATA
    out.mkdir(parents=True, exist_ok=True)
    write_profile(out / "mls_profile.txt")
    write_solar(out / "solar_bands.csv")
    write_lines(out / "h2o_synthetic.par")
    return 0


if __name__ == "__main__":
    raise SystemExit(main(sys.argv))
