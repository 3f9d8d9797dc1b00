import pytest

from opevolve.wavefield import build_grid, make_gaussian

# lines collected by test_acceptance, echoed after the run
ACCEPTANCE_LINES: list[str] = []


@pytest.fixture(scope="session")
def grid():
    return build_grid(1024, -30.0, 30.0)


@pytest.fixture(scope="session")
def gaussian(grid):
    return make_gaussian(grid, 0.0, 1.0, 0.0)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
