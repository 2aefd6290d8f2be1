"""Shared fixtures."""

import json
from pathlib import Path

import numpy as np
import pytest

from growthforms.config import LoggingConfig, ScenarioParams
from growthforms.geometry import QuadratureRule
from growthforms.logger import setup_logging


@pytest.fixture(autouse=True, scope="session")
def quiet_logging():
    """Keep library debug events out of the test output."""
    setup_logging(LoggingConfig(level="WARNING"))


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture
def params():
    return ScenarioParams()


@pytest.fixture
def coarse_rule():
    """Cheap rule for smooth integrands."""
    return QuadratureRule(order=6, subcells=8, support_boxes=64)


@pytest.fixture
def config_file(tmp_path: Path) -> Path:
    """A light run configuration writing into the test's temporary directory."""
    path = tmp_path / "growthforms.json"
    path.write_text(
        json.dumps(
            {
                "output": {"out_dir": str(tmp_path / "out")},
                "quadrature": {"order": 6, "subcells": 8},
                "samples": 50,
                "bumps": 4,
            }
        )
    )
    return path
