"""
Local py.test plugins

https://docs.pytest.org/en/latest/writing_plugins.html#conftest-py-plugins
"""
import numpy as np
import pytest
from click import testing

from splitq import MvnParams, ZmvlnParams, enumerate_patterns, structured_sigma
from splitq.settings import load_settings


# Settings fixtures


@pytest.fixture(autouse=True)
def clear_settings_cache():
    """Settings are cached per process, tests that patch the environment need a fresh load."""
    load_settings.cache_clear()
    yield
    load_settings.cache_clear()


# Parameter fixtures


@pytest.fixture
def small_sigma():
    return np.array([[1.0, 0.5, 0.2], [0.5, 1.0, 0.3], [0.2, 0.3, 1.0]])


@pytest.fixture
def small_mvn(small_sigma):
    return MvnParams(mu=np.array([1.0, 2.0, 3.0]), sigma=small_sigma)


@pytest.fixture
def small_zmvln(small_sigma):
    return ZmvlnParams(
        lam=np.array([0.6, 0.8, 0.7]), mu=np.array([0.0, 0.5, 1.0]), sigma=small_sigma
    )


@pytest.fixture
def pairs_of_three():
    return enumerate_patterns(3, 2)


@pytest.fixture
def structured_mvn():
    """Two groups of two items."""
    return MvnParams(mu=np.array([1.0, 1.0, 2.0, 2.0]), sigma=structured_sigma(2, 2, 0.8, 0.2))


# CLI fixtures


@pytest.fixture
def cli_runner():
    return testing.CliRunner()
