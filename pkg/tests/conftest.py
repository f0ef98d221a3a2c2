import os

import pytest
from hypothesis import HealthCheck, settings

settings.register_profile(
    "semifact",
    deadline=None,
    derandomize=True,
    max_examples=150,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("semifact")

ACCEPTANCE_LINES: list[str] = []


def pytest_addoption(parser):
    parser.addoption("--seed", type=int, default=None,
                     help="seed for random corpora (default: $SEMIFACT_SEED or 0)")


@pytest.fixture(scope="session")
def seed(request) -> int:
    opt = request.config.getoption("--seed")
    if opt is not None:
        return opt
    return int(os.environ.get("SEMIFACT_SEED", "0"))


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
