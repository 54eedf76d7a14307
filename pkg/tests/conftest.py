import os

import pytest
from hypothesis import HealthCheck, settings

from urllc_simo import ExplicitTopology

settings.register_profile(
    "default", deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

MICRO = 1e-6


def halving_topology(kappa, signal_path_loss=1.0):
    """Interferers at ``2**-i`` microwatts, ``i = 1..kappa``."""
    return ExplicitTopology(signal_path_loss, tuple(2.0 ** -i * MICRO for i in range(1, kappa + 1)))


@pytest.fixture
def halving8_topology():
    return halving_topology(8, 1e-5)


def pytest_terminal_summary(terminalreporter):
    module = __import__("sys").modules.get("test_acceptance")
    verdicts = getattr(module, "VERDICTS", None)
    if not verdicts:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(verdicts):
        terminalreporter.write_line(verdicts[number])
