import numpy as np
import pytest

from heisgeo import verification as ver


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


@pytest.fixture(scope="session")
def catalog():
    return ver.catalog()
