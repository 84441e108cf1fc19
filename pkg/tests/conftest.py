from pathlib import Path

import numpy as np
import pytest

from src.storage import load_reference_zeros

DATA_DIR = Path(__file__).parent / "data"


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def first_five_zeros():
    return [14.134725, 21.022040, 25.010858, 30.424876, 32.935062]


@pytest.fixture
def reference_zeros_path() -> Path:
    return DATA_DIR / "zeros_low.txt"


@pytest.fixture
def reference_zeros(reference_zeros_path):
    return load_reference_zeros(reference_zeros_path)
