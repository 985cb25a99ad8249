import numpy as np
import pytest

from trihered.quiver import Quiver


@pytest.fixture(scope="session")
def a2():
    return Quiver(2, [("a", 0, 1)])


@pytest.fixture(scope="session")
def a3():
    return Quiver(3, [("a", 0, 1), ("b", 1, 2)])


@pytest.fixture(scope="session")
def d4():
    # three arms feeding the branch vertex 3
    return Quiver(4, [("a", 0, 3), ("b", 1, 3), ("c", 2, 3)])


@pytest.fixture()
def rng():
    return np.random.default_rng(20240811)
