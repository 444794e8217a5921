import os
import sys

import pytest

sys.path.insert(0, os.path.dirname(__file__))

from linperm.field import make_field  # noqa: E402


@pytest.fixture(scope="session")
def F4():
    return make_field(2, 1, 2)


@pytest.fixture(scope="session")
def F9():
    return make_field(3, 1, 2)


@pytest.fixture(scope="session")
def F81():
    return make_field(3, 1, 4)
