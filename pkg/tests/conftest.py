import numpy as np
import pytest
from hypothesis import settings

from randdm.sampling import SeededStream

settings.register_profile("default", max_examples=40, deadline=None)
settings.load_profile("default")

ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def rng():
    return SeededStream(12345, 0)


def random_density(n, rng, rank=None):
    g = rng.normal((n, rank or n)) + 1j * rng.normal((n, rank or n))
    rho = g @ g.conj().T
    return rho / np.trace(rho).real


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
