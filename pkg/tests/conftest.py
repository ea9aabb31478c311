import math

import pytest

from oamdeutsch.lgmode import BeamParams, GridSpec

SQRT_HALF = 1 / math.sqrt(2)


@pytest.fixture(scope="session")
def beam():
    return BeamParams()


@pytest.fixture(scope="session")
def fine_grid():
    return GridSpec(n=512, extent=6.0, z=0.0)


ACCEPTANCE_LINES = []


@pytest.fixture
def criterion():
    """Record one PASS/FAIL line per acceptance criterion."""
    from contextlib import contextmanager

    @contextmanager
    def check(number, title):
        try:
            yield
        except BaseException:
            ACCEPTANCE_LINES.append(f"[{number}] FAIL  {title}")
            raise
        ACCEPTANCE_LINES.append(f"[{number}] PASS  {title}")

    return check


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
