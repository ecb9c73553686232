"""Writing scenario reports to disk."""

from __future__ import annotations

import json
import math
from datetime import datetime, timezone
from pathlib import Path

from atmoqkd.engine import write_spectrum_csv
from atmoqkd.errors import AtmoQKDError
from atmoqkd.scenario.runner import MemberResult, ScenarioReport

PINNED_TIMESTAMP = "1970-01-01T00:00:00Z"
SUMMARY_NAME = "summary.json"
PLOT_DATA_NAME = "plot_data.csv"


class ReportWriteError(AtmoQKDError):
    pass


def _db(value: float):
    # JSON has no infinity; total extinction is reported as null plus a flag
    return None if math.isinf(value) else value


def member_summary(m: MemberResult) -> dict:
    cfg = m.config
    return {
        "id": m.id,
        "description": cfg.description,
        "band_means": {
            "primary": {"window_nm": list(cfg.windows.primary_nm), "mean": m.primary.mean,
                        "points": m.primary.count, "underflow": m.primary.underflow},
            "secondary": {"window_nm": list(cfg.windows.secondary_nm), "mean": m.secondary.mean,
                          "points": m.secondary.count, "underflow": m.secondary.underflow},
        },
        "atmospheric_db": _db(m.budget.atmospheric_db),
        "total_extinction": m.budget.total_extinction,
        "diffraction_db": m.budget.diffraction_db,
        "system_db": m.budget.system_db,
        "total_db": _db(m.budget.total_db),
        "verdict": m.verdict.value,
        "contributor_db": {k: _db(v) for k, v in m.contributor_db.items()},
        "contributors": list(m.stack.labels),
        "grid": {"points": len(m.spectrum.grid), "resolution_cm1": m.spectrum.grid.resolution},
        "spectrum_file": f"{m.id}.csv",
    }


def _write(path: Path, writer) -> None:
    try:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            writer(fh)
    except OSError as exc:
        raise ReportWriteError(f"cannot write {path}: {exc.strerror}") from exc


def emit_report(report: ScenarioReport, directory: str | Path,
                timestamp: str | None = None) -> list[Path]:
    """Write spectra, ``summary.json`` and ``plot_data.csv`` into ``directory``.

    ``timestamp`` replaces the wall-clock generation time, which makes repeated
    runs byte-identical.  Returns the written paths.
    """
    out = Path(directory)
    try:
        out.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise ReportWriteError(f"cannot create {out}: {exc.strerror}") from exc
    if timestamp is None:
        timestamp = datetime.now(timezone.utc).strftime("%Y-%m-%dT%H:%M:%SZ")
    written = []

    for m in report.members:
        path = out / f"{m.id}.csv"
        meta = [("scenario", m.id), ("sweep", report.name),
                ("description", m.config.description),
                ("contributors", " ".join(m.stack.labels)),
                ("primary_band_mean", repr(m.primary.mean)),
                ("verdict", m.verdict.value)]
        _write(path, lambda fh, m=m, meta=meta: write_spectrum_csv(
            fh, m.spectrum, m.irradiance, meta))
        written.append(path)

    summary = {
        "sweep": report.name,
        "generated_at": timestamp,
        "metadata": dict(sorted(report.metadata.items())),
        "member_count": len(report.members),
        "members": [member_summary(m) for m in report.members],
    }
    path = out / SUMMARY_NAME
    _write(path, lambda fh: fh.write(json.dumps(summary, indent=2, sort_keys=True) + "\n"))
    written.append(path)

    def plot_rows(fh):
        fh.write("member,lambda_nm,transmittance\n")
        for m in report.members:
            lam = m.spectrum.grid.wavelength
            t = m.spectrum.values
            for k in range(len(lam) - 1, -1, -1):
                fh.write(f"{m.id},{lam[k]:.6f},{t[k]:.9e}\n")

    path = out / PLOT_DATA_NAME
    _write(path, plot_rows)
    written.append(path)
    return written
