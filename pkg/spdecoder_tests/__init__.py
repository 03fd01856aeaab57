import pytest

from spdecoder.helpers import settings

# Statistical reproduction checks, minutes to hours each
long_run = pytest.mark.skipif(
    not settings.sim.run_long_tests,
    reason='Long Monte Carlo runs are disabled, set SIM.RUN_LONG_TESTS to enable them')
