"""Shared fixtures for the gfiso test suite."""

from pathlib import Path

import numpy as np
import pytest

from src.channels.channel import random_channel
from src.isotns.tensor import random_isometric_tensor

DATA_DIR = Path(__file__).parent / "data"

MPS_LAYOUT = [("P", 2), ("V_t", 2), ("V_b", 2)]
LIGHTLIKE_LAYOUT = [("P", 2), ("V_r", 2), ("V_t", 2), ("V_l", 2), ("V_b", 2)]


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(20240611)


@pytest.fixture
def data_dir() -> Path:
    return DATA_DIR


@pytest.fixture
def small_channel(rng):
    return random_channel(rng, 4)


@pytest.fixture
def mps_tensor(rng):
    return random_isometric_tensor(rng, MPS_LAYOUT)


@pytest.fixture
def lightlike_tensor(rng):
    return random_isometric_tensor(rng, LIGHTLIKE_LAYOUT)


@pytest.fixture
def output_dir(tmp_path: Path) -> Path:
    return tmp_path / "out"
