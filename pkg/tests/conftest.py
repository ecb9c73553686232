import pytest

from atmoqkd.scenario import preset, run_sweep
from helpers import ACCEPTANCE_RESULTS


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for number in sorted(ACCEPTANCE_RESULTS):
        for name, passed, detail in ACCEPTANCE_RESULTS[number]:
            tr.write_line(f"{'PASS' if passed else 'FAIL'}  criterion {number}: {name}  [{detail}]")


@pytest.fixture(scope="session")
def preset_reports():
    """Run each preset at most once per session."""
    cache = {}

    def get(name):
        if name not in cache:
            cache[name] = run_sweep(preset(name), name)
        return cache[name]

    return get
