import numpy as np
import pytest

from cspath import DistributionSpec, from_arrays, generate

UNIFORM = DistributionSpec.uniform()


@pytest.fixture(scope="session")
def uniform():
    return UNIFORM


def make_uniform_instance(n, seed, storage="implicit"):
    return generate(n, seed, UNIFORM, UNIFORM, storage=storage)


@pytest.fixture
def k3_dominated():
    """Triangle where the direct edge is dominated by the detour.

    edges (0,1): w=.5 c=.5; (0,2): w=.1 c=.2; (2,1): w=.1 c=.2
    paths 0->1: (0.5, 0.5) and (0.2, 0.4).
    """
    #              (0,1)       (0,2)       (1,2)
    w = np.array([0.5, 0.1, 0.1])
    c = np.array([0.5, 0.2, 0.2])
    return from_arrays(3, w, c)


@pytest.fixture
def k3_two_frontier():
    """Triangle with an incomparable pair on the target frontier.

    edges (0,1): w=.1 c=.9; (0,2): w=.15 c=.1; (2,1): w=.15 c=.1
    paths 0->1: (0.1, 0.9) and (0.3, 0.2).
    """
    w = np.array([0.1, 0.15, 0.15])
    c = np.array([0.9, 0.1, 0.1])
    return from_arrays(3, w, c)
