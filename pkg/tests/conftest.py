import math
import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from veil.elements import ObjectSpec  # noqa: E402
from veil.network import NetworkConfig  # noqa: E402

HIDE_PHASE = 3 * math.pi / 2

ACCEPTANCE_LINES = []


@pytest.fixture
def default_config():
    return NetworkConfig()


@pytest.fixture
def two_crystal_config():
    return NetworkConfig(gammas=(1.0, 1.0, 0.0))


@pytest.fixture
def hidden_config():
    """gammas all one, balanced splitters, object 1 set to the invisibility point."""
    return NetworkConfig(object1=ObjectSpec(1.0, HIDE_PHASE))


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
