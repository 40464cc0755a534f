import random

import pytest

from dirset.field_core import build_field


@pytest.fixture(scope="session")
def F5():
    return build_field(5, 1)


@pytest.fixture(scope="session")
def F7():
    return build_field(7, 1)


@pytest.fixture(scope="session")
def F8():
    return build_field(2, 3)


@pytest.fixture(scope="session")
def F9():
    return build_field(3, 2)


@pytest.fixture
def rng():
    return random.Random(0xD1F5E7)
