import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from bellscope.core import Scenario
from bellscope.quantum import born_behavior, singlet_chsh_model

settings.register_profile("default", deadline=None, max_examples=50,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

CHSH_SC = Scenario.homogeneous(2, 2, 2)


@pytest.fixture(scope="session")
def tsirelson():
    return born_behavior(singlet_chsh_model())


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def pytest_terminal_summary(terminalreporter):
    mod = __import__("sys").modules.get("test_acceptance") or __import__("sys").modules.get("tests.test_acceptance")
    lines = getattr(mod, "RESULTS", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
