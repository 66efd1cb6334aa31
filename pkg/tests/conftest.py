import pytest

from cddswap.scenarios import DEFAULT_BAND, calibrate

_LINES = pytest.StashKey[list]()


@pytest.fixture(scope="session")
def calibrated_eta():
    """Coupling calibrated on the unprotected fig2a run at the default grid (about 30 s)."""
    return calibrate(DEFAULT_BAND)


@pytest.fixture
def acceptance_report(pytestconfig):
    lines = pytestconfig.stash.setdefault(_LINES, [])

    def report(number, ok, detail):
        line = f"criterion {number:>2}: {'PASS' if ok else 'FAIL'}  {detail}"
        print(line)
        lines.append((number, line))
        return ok

    return report


def pytest_terminal_summary(terminalreporter, config):
    lines = config.stash.get(_LINES, [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for _, line in sorted(lines):
            terminalreporter.write_line(line)
