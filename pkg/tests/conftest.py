from pathlib import Path

import numpy as np
import pytest

from app.core.params import get_preset

DATA_DIR = Path(__file__).parent / "data"


def pytest_addoption(parser):
    parser.addoption("--runslow", action="store_true", default=False, help="run slow acceptance tests")


def pytest_collection_modifyitems(config, items):
    if config.getoption("--runslow"):
        return
    skip_slow = pytest.mark.skip(reason="needs --runslow")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skip_slow)


@pytest.fixture
def params():
    return get_preset("e8kem-2048-p5")


@pytest.fixture
def params_4096():
    return get_preset("e8kem-4096-p4")


@pytest.fixture
def rng():
    return np.random.default_rng(20240607)


@pytest.fixture
def data_dir() -> Path:
    return DATA_DIR
