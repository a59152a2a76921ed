from pathlib import Path

import numpy as np
import pytest

FIXTURES_DIR = Path(__file__).resolve().parents[1] / "fixtures"


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def fixtures_dir() -> Path:
    return FIXTURES_DIR


@pytest.fixture(params=[2, 3, 4, 5])
def n(request) -> int:
    return request.param
