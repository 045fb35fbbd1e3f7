import os

import numpy as np
import pytest
from hypothesis import HealthCheck, settings

settings.register_profile(
    "default", max_examples=200, deadline=None, derandomize=True,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.register_profile("thorough", max_examples=2000, deadline=None)
settings.load_profile(os.environ.get("DISC_OSC_HYPOTHESIS", "default"))

# lines printed by tests/test_acceptance.py, shown in the terminal summary
ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
        terminalreporter.write_line(line)


@pytest.fixture(scope="session")
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture(scope="session")
def gamma_one():
    from disc_osc.constructions import example_gamma
    from disc_osc.ode import SolutionBasis

    W = example_gamma(1.0)
    return W, SolutionBasis(W.A)


@pytest.fixture(scope="session")
def q_two():
    from disc_osc.constructions import example_q
    from disc_osc.ode import SolutionBasis

    W = example_q(2.0)
    return W, SolutionBasis(W.A)


@pytest.fixture(scope="session")
def dyadic_witness():
    from disc_osc.constructions import build_nonnormal_witness, dyadic_zeros

    return build_nonnormal_witness(dyadic_zeros(15))
