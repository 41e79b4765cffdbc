import numpy as np
import pytest

from ppbnb.benchmarks import get_problem
from ppbnb.geometry import make_root
from ppbnb.problems import ProblemDefinition, ReferencePoints


@pytest.fixture(scope="session")
def mop():
    return get_problem("MOP")


@pytest.fixture(scope="session")
def deb2dk():
    return get_problem("DEB2DK")


@pytest.fixture(scope="session")
def deb3dk():
    return get_problem("DEB3DK")


@pytest.fixture(scope="session")
def welded_beam():
    return get_problem("welded-beam")


@pytest.fixture(scope="session")
def water_resources():
    return get_problem("water-resources")


@pytest.fixture
def identity_ref():
    """Reference points making normalization the identity on two objectives."""
    return ReferencePoints(np.zeros(2), np.ones(2))


def make_line_problem(lipschitz=None):
    """F(x) = (x, -x) on [0, 2]; handy closed-form test problem."""
    return ProblemDefinition(
        name="line", n=1, m=2, p=0,
        domain=make_root([0.0], [2.0]),
        objectives=lambda X: np.stack([X[:, 0], -X[:, 0]], axis=1),
        lipschitz_f=lipschitz,
    )
