import os

from hypothesis import HealthCheck, settings

settings.register_profile("default", max_examples=40, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.register_profile("thorough", max_examples=400, deadline=None)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))


import mpmath
import pytest


@pytest.fixture(scope="module")
def high_precision():
    """Run a module's mpmath arithmetic at 256 bits."""
    with mpmath.workprec(256):
        yield


_CRITERIA = {}


@pytest.fixture(scope="session")
def acceptance_log():
    """Mapping criterion number -> (title, passed, detail), filled by the
    acceptance tests and printed at the end of the run."""
    return _CRITERIA


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_CRITERIA):
        title, ok, detail = _CRITERIA[n]
        terminalreporter.write_line(f"[{'PASS' if ok else 'FAIL'}] {n:>2}. {title}: {detail}")
