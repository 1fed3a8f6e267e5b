import pytest
from hypothesis import settings

from relaysched.channel import BroadcastScenario, RelayScenario

settings.register_profile("default", deadline=None, max_examples=60)
settings.load_profile("default")

# filled by test_acceptance; echoed at the end of the session
ACCEPTANCE_LINES = []


@pytest.fixture
def fig2_scenario():
    def make(K):
        return RelayScenario(snr_b=1.0, snr_r=10.0, snr_B=100.0, K=K)
    return make


@pytest.fixture
def fig4_scenario():
    def make(UV, **kw):
        params = dict(snr_F_b=1.0, snr_F_r=100.0, snr_N_b=100.0, snr_N_r=1.0, snr_B=1000.0,
                      beta_B=0.25, beta_F=0.25, beta_N=0.5, U=UV, V=UV)
        params.update(kw)
        return BroadcastScenario(**params)
    return make


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
