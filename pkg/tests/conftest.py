import functools

import pytest

from rotbeta.cli import config_path
from rotbeta.model import load_params
from rotbeta.sofic import build_sofic


@functools.lru_cache(maxsize=None)
def example(name):
    return load_params(config_path(name))


@functools.lru_cache(maxsize=None)
def sofic_build(name):
    params = example(name)
    return build_sofic(params)


@pytest.fixture(scope="session")
def threefold():
    return example("threefold")


@pytest.fixture(scope="session")
def fivefold():
    return example("fivefold")
