import numpy as np
import pytest

from fballoc import SystemParams


@pytest.fixture
def fig_params():
    return SystemParams(4, np.array([100.0, 10.0, 1.0]), 1.0)


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
