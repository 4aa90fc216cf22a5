import pytest

_LINES = []


@pytest.fixture(scope="session")
def acceptance_cache():
    """Spectra shared between Monte Carlo criteria within one session."""
    return {}


@pytest.fixture(scope="session")
def acceptance_log():
    return _LINES


def pytest_terminal_summary(terminalreporter):
    if _LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(_LINES, key=lambda s: int(s.split("#")[1].split()[0])):
            terminalreporter.write_line(line)
