"""Command-line interface.

    atmoqkd run SCENARIO.toml [SCENARIO.toml ...] [-o DIR]
    atmoqkd preset NAME [-o DIR] [--write-configs DIR]
    atmoqkd validate SCENARIO.toml
    atmoqkd formats

Exit codes: 0 success, 2 usage, 3 input/parse error, 4 runtime error.
"""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from atmoqkd import __version__
from atmoqkd.engine import SPECTRUM_COLUMNS
from atmoqkd.errors import AtmoQKDError, ParseError, ValidationError
from atmoqkd.scenario import config as cfgmod
from atmoqkd.scenario.presets import PRESETS, UnknownPresetError, preset
from atmoqkd.scenario.report import PINNED_TIMESTAMP, emit_report
from atmoqkd.scenario.runner import ScenarioError, Workspace, _open, run_sweep

EXIT_OK, EXIT_USAGE, EXIT_INPUT, EXIT_RUNTIME = 0, 2, 3, 4

FORMATS_TEXT = f"""\
Solar band file (UTF-8 text)
  lambda_lo_nm,lambda_hi_nm,irradiance_W_m2_nm   one band per line, '#' comments
  bands are half-open [lo, hi) and must not overlap

Atmosphere level file (UTF-8 text)
  z_km p_atm T_K n_air_cm3 n_h2o_cm3   whitespace separated, ground level first
  altitude strictly increasing, pressure non-increasing, top >= 50 km

Line list (HITRAN 2004 .par, 160-character fixed-width records)
  molecule 1-2, isotopologue 3, nu0 4-15, S 16-25, (A 26-35 ignored),
  gamma_air 36-40, gamma_self 41-45, E'' 46-55, n_air 56-59, delta_air 60-67,
  columns 68-160 carried verbatim

Spectrum output (CSV, ascending wavelength, '# key: value' header lines)
  {','.join(SPECTRUM_COLUMNS)}

Report directory
  <member>.csv per member, summary.json, plot_data.csv (member,lambda_nm,transmittance)

{cfgmod.SCHEMA_TEXT}"""


def _add_run_options(p: argparse.ArgumentParser) -> None:
    p.add_argument("-o", "--out", default="atmoqkd-out", help="output directory")
    p.add_argument("--resolution", type=float, default=None,
                   help="override grid resolution in cm-1 for every member")
    p.add_argument("--lenient", action="store_true",
                   help="skip and count unparsable line-list records instead of failing")
    p.add_argument("--pin-timestamp", nargs="?", const=PINNED_TIMESTAMP, default=None,
                   metavar="STAMP", help=f"fixed generated_at value (default {PINNED_TIMESTAMP})")
    p.add_argument("--workers", type=int, default=1, help="parallel member processes")


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="atmoqkd", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="cmd", required=True)

    r = sub.add_parser("run", help="run scenario files and write a report")
    r.add_argument("configs", nargs="+", help="scenario TOML files")
    r.add_argument("--name", default=None, help="sweep name (default: first scenario id)")
    _add_run_options(r)

    s = sub.add_parser("preset", help="run one of the built-in sweeps")
    s.add_argument("name", help=f"one of: {', '.join(PRESETS)}")
    s.add_argument("--write-configs", metavar="DIR", default=None,
                   help="write the member scenario files to DIR instead of running")
    _add_run_options(s)

    v = sub.add_parser("validate", help="check scenario files and their inputs")
    v.add_argument("configs", nargs="+")

    sub.add_parser("formats", help="describe the input and output file formats")
    return p


def _prepare(configs, args):
    out = []
    for c in configs:
        if args.resolution is not None:
            if not args.resolution > 0:
                raise cfgmod.ConfigError("--resolution must be positive")
            c = c.with_resolution(args.resolution)
        if args.lenient:
            c = c.with_strict(False)
        out.append(c)
    return out


def _check_inputs(cfg: cfgmod.ScenarioConfig) -> None:
    ws = Workspace()
    ws.profile(cfg.resolve_path(cfg.profile))
    ws.solar(cfg.resolve_path(cfg.solar))
    for _, ref in cfg.lines.files:
        with _open(cfg.resolve_path(ref)):
            pass


def _run(configs, name, args) -> int:
    report = run_sweep(_prepare(configs, args), name, workers=args.workers)
    paths = emit_report(report, args.out, args.pin_timestamp)
    for m in report.members:
        db = m.budget.atmospheric_db
        print(f"{m.id}: band mean {m.primary.mean:.6g} "
              f"({m.config.windows.primary_nm[0]:g}-{m.config.windows.primary_nm[1]:g} nm), "
              f"atmospheric {db:.3f} dB, {m.verdict.value}")
    print(f"wrote {len(paths)} files to {args.out}")
    return EXIT_OK


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        if args.cmd == "formats":
            print(FORMATS_TEXT, end="")
            return EXIT_OK
        if args.cmd == "validate":
            for path in args.configs:
                cfg = cfgmod.load(path)
                _check_inputs(cfg)
                print(f"{path}: ok ({cfg.id})")
            return EXIT_OK
        if args.cmd == "preset":
            try:
                configs = preset(args.name)
            except UnknownPresetError as exc:
                parser.error(str(exc))
            if args.write_configs:
                d = Path(args.write_configs)
                d.mkdir(parents=True, exist_ok=True)
                for c in configs:
                    (d / f"{c.id}.toml").write_text(cfgmod.dumps(c), encoding="utf-8")
                print(f"wrote {len(configs)} scenario files to {d}")
                return EXIT_OK
            return _run(configs, args.name, args)
        if args.cmd == "run":
            configs = [cfgmod.load(p) for p in args.configs]
            return _run(configs, args.name or configs[0].id, args)
    except ScenarioError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT if exc.input_error else EXIT_RUNTIME
    except (ParseError, ValidationError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except AtmoQKDError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME
    return EXIT_USAGE


if __name__ == "__main__":
    raise SystemExit(main())
