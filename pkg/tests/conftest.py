import os

import pytest

from unselect.dataset import load_registry

DATA_DIR = os.path.join(os.path.dirname(__file__), "..", "data")


@pytest.fixture(scope="session")
def registry():
    return load_registry(os.path.join(DATA_DIR, "registry.txt"))


@pytest.fixture(scope="session")
def diabetes(registry):
    return registry.load("diabetes")


@pytest.fixture(scope="session")
def heart(registry):
    return registry.load("heart")


@pytest.fixture(scope="session")
def ecoli(registry):
    return registry.load("ecoli")


@pytest.fixture(scope="session")
def lung(registry):
    return registry.load("lung")


@pytest.fixture(scope="session")
def breast(registry):
    return registry.load("breast")
