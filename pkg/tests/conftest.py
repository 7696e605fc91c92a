import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from preisach_remnant import DiscretePreisach, InterfaceLine, PlaneBounds, UniformWeight

settings.register_profile(
    "default", deadline=None, suppress_health_check=[HealthCheck.too_slow, HealthCheck.data_too_large]
)
settings.load_profile("default")

# every property suite runs at least this many random cases
FUZZ = settings(max_examples=200, deadline=None, suppress_health_check=[HealthCheck.too_slow])


@pytest.fixture(scope="session")
def bounds():
    return PlaneBounds(-400.0, 400.0)


@pytest.fixture(scope="session")
def uniform(bounds):
    return UniformWeight.with_mass(bounds, 1.0)


@pytest.fixture(scope="session")
def post_reset(bounds):
    return InterfaceLine.post_reset(bounds, 400.0)


@pytest.fixture(scope="session")
def reference_grid(bounds):
    """1000-level grid with equal relay weights 1/N; copy before mutating."""
    return DiscretePreisach.uniform(1000, bounds, 1.0)


@pytest.fixture
def grid1000(reference_grid):
    return reference_grid.copy()


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


# one line per acceptance criterion, echoed again in the terminal summary
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
