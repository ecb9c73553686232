"""Fixed-width HITRAN (2004, 160-character) transition records."""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import IO, Iterable, Sequence

import numpy as np

from atmoqkd.errors import FieldError, FormatError, ParseError, ValidationError

RECORD_LENGTH = 160
DEFAULT_STRENGTH_FLOOR = 1e-28
DEFAULT_WING_CUTOFF = 25.0  # cm-1

# name -> (first column, last column), 1-based inclusive
COLUMNS = {
    "molecule_id": (1, 2),
    "isotopologue_id": (3, 3),
    "nu0": (4, 15),
    "s_ref": (16, 25),
    "einstein_a": (26, 35),
    "gamma_air": (36, 40),
    "gamma_self": (41, 45),
    "elower": (46, 55),
    "n_air": (56, 59),
    "delta_air": (60, 67),
}
TAIL_COLUMNS = (68, 160)

# fields that may be left blank in real files; blank decodes as zero
_BLANK_OK = {"gamma_self", "n_air", "delta_air"}

_REAL = re.compile(r"[+-]?(\d+\.?\d*|\.\d+)([eEdD][+-]?\d+)?")
_INT = re.compile(r"[+-]?\d+")


@dataclass(frozen=True)
class LineRecord:
    """One molecular transition.

    Units: ``nu0`` cm-1; ``s_ref`` cm-1/(molecule cm-2) at 296 K;
    ``gamma_air``/``gamma_self``/``delta_air`` cm-1 atm-1; ``elower`` cm-1.
    ``einstein_a`` and ``tail`` hold columns 26-35 and 68-160 verbatim so a
    record can be written back unchanged.
    """

    molecule_id: int
    isotopologue_id: int
    nu0: float
    s_ref: float
    gamma_air: float
    gamma_self: float = 0.0
    elower: float = 0.0
    n_air: float = 0.0
    delta_air: float = 0.0
    einstein_a: str = field(default=" " * 10, compare=False)
    tail: str = field(default=" " * 93, compare=False)

    def __post_init__(self):
        if not self.nu0 > 0:
            raise ValidationError(f"line centre must be positive, got {self.nu0}")
        if not self.s_ref >= 0:
            raise ValidationError(f"intensity must be non-negative, got {self.s_ref}")
        if not self.gamma_air > 0:
            raise ValidationError(f"air-broadened width must be positive, got {self.gamma_air}")
        if not self.gamma_self >= 0:
            raise ValidationError(f"self-broadened width must be non-negative, got {self.gamma_self}")
        if not self.elower >= 0:
            raise ValidationError(f"lower-state energy must be non-negative, got {self.elower}")


def _field(row: str, name: str, line: int | None) -> str:
    a, b = COLUMNS[name]
    return row[a - 1:b]


def _real(row: str, name: str, line: int | None) -> float:
    text = _field(row, name, line).strip()
    if not text:
        if name in _BLANK_OK:
            return 0.0
        raise FieldError(f"blank {name} field", COLUMNS[name], line)
    if not _REAL.fullmatch(text):
        raise FieldError(f"{name} field {text!r} is not a number", COLUMNS[name], line)
    return float(text.replace("d", "e").replace("D", "e"))


def _int(row: str, name: str, line: int | None) -> int:
    text = _field(row, name, line).strip()
    if not _INT.fullmatch(text):
        raise FieldError(f"{name} field {text!r} is not an integer", COLUMNS[name], line)
    return int(text)


def parse_record(row: str, line: int | None = None) -> LineRecord:
    """Decode one 160-character record.

    Trailing ``\\r``/``\\n`` are ignored; anything else must make the row
    exactly 160 characters long.
    """
    row = row.rstrip("\r\n")
    if len(row) != RECORD_LENGTH:
        raise FormatError(
            f"record must be {RECORD_LENGTH} characters, got {len(row)}", len(row), line)
    mol = _int(row, "molecule_id", line)
    iso_text = _field(row, "isotopologue_id", line)
    if not iso_text.isdigit():
        raise FieldError(f"isotopologue field {iso_text!r} is not a digit",
                         COLUMNS["isotopologue_id"], line)
    iso = int(iso_text) or 10
    values = {name: _real(row, name, line) for name in
              ("nu0", "s_ref", "gamma_air", "gamma_self", "elower", "n_air", "delta_air")}
    try:
        return LineRecord(
            molecule_id=mol, isotopologue_id=iso,
            einstein_a=_field(row, "einstein_a", line),
            tail=row[TAIL_COLUMNS[0] - 1:],
            **values)
    except ValidationError as exc:
        if line is not None:
            raise ValidationError(f"line {line}: {exc}") from None
        raise


def _fixed(value: float, width: int, decimals: int) -> str:
    text = f"{value:.{decimals}f}"
    if len(text) > width:
        # Fortran F-format drops the leading zero when space is short
        text = text.replace("0.", ".", 1)
    if len(text) > width:
        raise ValueError(f"{value} does not fit F{width}.{decimals}")
    return text.rjust(width)


def _sci(value: float, width: int = 10, decimals: int = 3) -> str:
    text = f"{value:.{decimals}E}"
    if len(text) > width:
        raise ValueError(f"{value} does not fit E{width}.{decimals}")
    return text.rjust(width)


def format_record(rec: LineRecord) -> str:
    """Write a record back in the 160-character layout."""
    iso = "0" if rec.isotopologue_id == 10 else str(rec.isotopologue_id)
    row = (
        f"{rec.molecule_id:2d}"
        + iso
        + _fixed(rec.nu0, 12, 6)
        + _sci(rec.s_ref)
        + rec.einstein_a.ljust(10)[:10]
        + _fixed(rec.gamma_air, 5, 4)
        + _fixed(rec.gamma_self, 5, 3)
        + _fixed(rec.elower, 10, 4)
        + _fixed(rec.n_air, 4, 2)
        + _fixed(rec.delta_air, 8, 6)
        + rec.tail.ljust(93)[:93]
    )
    assert len(row) == RECORD_LENGTH
    return row


@dataclass(frozen=True, eq=False)
class LineList:
    """Transitions sorted by line centre, with the numeric columns as arrays."""

    records: tuple[LineRecord, ...]
    dropped: int = 0
    skipped: int = 0

    def __post_init__(self):
        nu = np.array([r.nu0 for r in self.records], dtype=float)
        if nu.size > 1 and np.any(np.diff(nu) < 0):
            raise ValidationError("line list must be sorted by line centre")
        arrays = {
            "nu0": nu,
            "s_ref": np.array([r.s_ref for r in self.records], dtype=float),
            "gamma_air": np.array([r.gamma_air for r in self.records], dtype=float),
            "gamma_self": np.array([r.gamma_self for r in self.records], dtype=float),
            "elower": np.array([r.elower for r in self.records], dtype=float),
            "n_air": np.array([r.n_air for r in self.records], dtype=float),
            "delta_air": np.array([r.delta_air for r in self.records], dtype=float),
        }
        for arr in arrays.values():
            arr.setflags(write=False)
        object.__setattr__(self, "arrays", arrays)

    @property
    def count(self) -> int:
        return len(self.records)

    def __len__(self) -> int:
        return len(self.records)

    @classmethod
    def from_records(cls, records: Iterable[LineRecord], **kw) -> "LineList":
        # sorted() is stable, so equal centres keep their input order
        return cls(tuple(sorted(records, key=lambda r: r.nu0)), **kw)

    def __add__(self, other: "LineList") -> "LineList":
        return LineList.from_records(self.records + other.records)


def load_line_list(source: IO, molecule_id: int,
                   nu_window: Sequence[float],
                   strength_floor: float = DEFAULT_STRENGTH_FLOOR,
                   strict: bool = True,
                   wing_cutoff: float = DEFAULT_WING_CUTOFF) -> LineList:
    """Read, filter and sort a ``.par`` stream.

    Records are kept when they belong to ``molecule_id``, their centre lies in
    ``nu_window`` widened by ``wing_cutoff`` on both sides, and
    ``s_ref >= strength_floor``.  ``LineList.dropped`` counts well-formed
    records removed by these filters; ``LineList.skipped`` counts unparsable
    rows tolerated when ``strict`` is false.  In strict mode the first bad row
    raises with its 1-based line number.
    """
    lo, hi = (float(v) for v in nu_window)
    if not lo < hi:
        raise ValueError(f"invalid wavenumber window ({lo}, {hi})")
    if strength_floor < 0:
        raise ValueError("strength_floor must be >= 0")
    lo -= wing_cutoff
    hi += wing_cutoff
    kept, dropped, skipped = [], 0, 0
    for lineno, raw in enumerate(source, start=1):
        if isinstance(raw, bytes):
            try:
                raw = raw.decode("ascii")
            except UnicodeDecodeError:
                if strict:
                    raise ParseError("record is not ASCII", lineno) from None
                skipped += 1
                continue
        if not raw.strip():
            continue
        try:
            rec = parse_record(raw, lineno)
        except (ParseError, ValidationError):
            if strict:
                raise
            skipped += 1
            continue
        if rec.molecule_id != molecule_id or not lo <= rec.nu0 <= hi or rec.s_ref < strength_floor:
            dropped += 1
            continue
        kept.append(rec)
    return LineList.from_records(kept, dropped=dropped, skipped=skipped)
