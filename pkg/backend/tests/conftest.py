"""
Shared fixtures for the hetcache test suite.

Desk-scale configurations are small enough to enumerate every demand and
every user permutation.
"""
import numpy as np
import orjson
import pytest

from hetcache.schemas.system import SystemConfig
from hetcache.services.scheme2 import generate_library, place, split_params


@pytest.fixture
def desk_config() -> SystemConfig:
    """K=4 users in 2 groups, 4 common files, 2 unique files per group, M=2."""
    return SystemConfig(K=4, G=2, Nc=4, Nu=2, M=2)


@pytest.fixture
def desk_placement(desk_config):
    return place(desk_config, 0.5)


@pytest.fixture
def desk_params(desk_config):
    return split_params(desk_config, 0.5)


@pytest.fixture
def desk_library(desk_config):
    return generate_library(desk_config, seed=0)


@pytest.fixture
def single_group_config() -> SystemConfig:
    return SystemConfig(K=2, G=1, Nc=2, Nu=2, M=2)


@pytest.fixture
def two_group_config() -> SystemConfig:
    return SystemConfig(K=2, G=2, Nc=2, Nu=1, M=2)


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(20240607)


@pytest.fixture
def write_scenario(tmp_path):
    """Write a scenario dict to a JSON file and return its path."""
    def _write(payload, name: str = "scenario.json") -> str:
        path = tmp_path / name
        path.write_bytes(orjson.dumps(payload))
        return str(path)

    return _write
