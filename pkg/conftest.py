from pathlib import Path

import numpy as np
import pytest
from _pytest.config import Config
from _pytest.nodes import Item

from config import config as app_config
from geometry import TrackedSpace
from utils import get_logger

logger = get_logger(__name__)

MODULE_MARKERS = {
    "test_geometry": "geometry",
    "test_locomotion": "locomotion",
    "test_pathgen": "pathgen",
    "test_controllers": "controllers",
    "test_policy": "policy",
    "test_ppo": "ppo",
    "test_harness": "harness",
    "test_config": "configuration",
    "test_acceptance": "acceptance",
}


# --------------------------------------------
# pytest hooks
# --------------------------------------------


def pytest_configure(config: Config) -> None:
    # Ensure required directories exist
    for directory in ["logs", "reports"]:
        Path(directory).mkdir(parents=True, exist_ok=True)

    logger.info("=" * 80)
    logger.info("TEST EXECUTION STARTED")
    logger.info(f"Config file: {app_config.config_path}")
    logger.info("=" * 80)


def pytest_collection_modifyitems(config: Config, items: list[Item]) -> None:
    # Auto-mark tests by the package their step file covers
    for item in items:
        for prefix, marker in MODULE_MARKERS.items():
            if prefix in item.nodeid:
                item.add_marker(getattr(pytest.mark, marker))


# -------------------------------------------
# configuration fixtures
# -------------------------------------------


@pytest.fixture(scope="session")
def test_config():
    logger.info("Loading test configuration...")
    yield app_config
    logger.info("Test configuration cleanup complete")


# -------------------------------------------
# simulation fixtures
# -------------------------------------------


@pytest.fixture
def empty_space() -> TrackedSpace:
    return TrackedSpace(half_width=7.5, half_depth=7.5)


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(12345)


# -------------------------------------------
# BDD fixtures
# -------------------------------------------


@pytest.fixture
def context():
    return {}
