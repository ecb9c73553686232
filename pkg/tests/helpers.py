"""Small builders shared by the test modules."""

import io

from atmoqkd.lineparse import LineRecord, format_record


def make_record(**kw) -> LineRecord:
    base = dict(molecule_id=1, isotopologue_id=1, nu0=12257.0, s_ref=1.0e-24,
                gamma_air=0.06, gamma_self=0.30, elower=100.0, n_air=0.65, delta_air=-0.002)
    base.update(kw)
    return LineRecord(**base)


def par_stream(records) -> io.BytesIO:
    return io.BytesIO("".join(format_record(r) + "\n" for r in records).encode("ascii"))


# Acceptance outcomes, filled by test_acceptance.py and printed at the end of the run.
ACCEPTANCE_RESULTS: dict[int, list[tuple[str, bool, str]]] = {}


def record_criterion(number: int, name: str, passed: bool, detail: str) -> None:
    ACCEPTANCE_RESULTS.setdefault(number, []).append((name, passed, detail))
