import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from fuzzyqm.fock import build_space
from fuzzyqm.opwave import random_balanced

settings.register_profile(
    "default",
    deadline=None,
    max_examples=40,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("default")


@pytest.fixture(scope="session")
def space10():
    return build_space(10)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def balanced(space10, rng):
    def make(lam=0.5, top=None):
        return random_balanced(space10, lam, rng, top)

    return make


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
