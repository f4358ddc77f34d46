import numpy as np
import pytest
from hypothesis import settings

from radnls.radial_spectral import RadialGrid, sample_function

settings.register_profile("lab", max_examples=25, deadline=None)
settings.load_profile("lab")


@pytest.fixture(scope="session")
def grid():
    return RadialGrid(32.0, 1024)


@pytest.fixture(scope="session")
def gauss(grid):
    return sample_function(grid, lambda r: np.exp(-r ** 2 / 2))


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split("criterion ")[1].split(":")[0])):
            terminalreporter.write_line(line)
