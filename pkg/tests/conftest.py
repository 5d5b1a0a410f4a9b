"""
Test configuration.
"""

import pytest

from dunkl_probe.config import Config, set_config
from dunkl_probe.dunkl_core import ReflectionGroupZ2d


def pytest_configure(config):
    """Configure pytest with custom markers."""
    config.addinivalue_line("markers", "asyncio: mark test as async")
    config.addinivalue_line("markers", "slow: mark test as slow")


@pytest.fixture
def config():
    """Create test configuration from the bundled config/probe.yaml."""
    config = Config()
    set_config(config)
    return config


@pytest.fixture
def group2():
    """ℤ₂² with κ = (3/5, 3/10)."""
    return ReflectionGroupZ2d.from_kappa(["3/5", "3/10"])


@pytest.fixture
def classical2():
    """ℤ₂² with κ = 0."""
    return ReflectionGroupZ2d.classical(2)


@pytest.fixture
def group1():
    """ℤ₂ with κ = 1/2."""
    return ReflectionGroupZ2d.from_kappa(["1/2"])
