import contextlib

import pytest

from vacharvest.amplitudes import ScenarioConfig, assemble_amplitudes

_CRITERIA: dict[int, str] = {}


@pytest.fixture(scope="session")
def harvest_cfg():
    return ScenarioConfig.symmetric(9.5, 1.0, coupling=0.01)


@pytest.fixture(scope="session")
def harvest_amp(harvest_cfg):
    return assemble_amplitudes(harvest_cfg)


class _Criterion:
    def __init__(self, number, title):
        self.number, self.title = number, title
        self.notes = []

    def note(self, text):
        self.notes.append(text)

    def check(self, ok, message):
        if not ok:
            raise AssertionError(message)


@pytest.fixture
def criterion():
    """``with criterion(n, title) as c:`` records one PASS/FAIL line for the summary."""

    @contextlib.contextmanager
    def run(number, title):
        c = _Criterion(number, title)
        try:
            yield c
        except BaseException as exc:
            msg = str(exc).splitlines()[0] if str(exc) else type(exc).__name__
            _CRITERIA[number] = f"criterion {number} FAIL  {title}: {msg}"
            raise
        _CRITERIA[number] = f"criterion {number} PASS  {title}" + (f" ({'; '.join(c.notes)})" if c.notes else "")

    return run


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_CRITERIA):
        terminalreporter.write_line(_CRITERIA[n])
