import random

import pytest

from skewlrc.galois import ExtField
from skewlrc.mrlrc import mrlrc_setup


@pytest.fixture(scope="session")
def f53():
    return ExtField(5, 3)


@pytest.fixture(scope="session")
def f73():
    return ExtField(7, 3)


@pytest.fixture(scope="session")
def params737(f53):
    """g=3, r=3, delta=3, k=7 over GF(5^3): the running example size."""
    return mrlrc_setup(f53, 3, 3, 3, 7)


@pytest.fixture(scope="session")
def params_medium(f73):
    return mrlrc_setup(f73, 3, 3, 2, 7)


@pytest.fixture
def rng():
    return random.Random(0xC0DE)
