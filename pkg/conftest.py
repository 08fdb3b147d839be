import os

import pytest

from src.config import FIXTURE_DIR
from src.scenario import load_scenario


def pytest_configure(config):
    config.addinivalue_line("markers", "slow: long Groebner or cohomology runs")


@pytest.fixture
def scenario():
    """Loads a shipped fixture by name."""
    def _load(name):
        return load_scenario(os.path.join(FIXTURE_DIR, f"{name}.scn"))
    return _load
