import numpy as np
import pytest

from app.rbf.models import NodeSet


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def random_nodes(rng, n, dim):
    return NodeSet(rng.random((n, dim)))


def line_nodes(n):
    return NodeSet(np.linspace(0.0, 1.0, n)[:, None])


@pytest.fixture
def nodes_1d():
    return line_nodes(20)


@pytest.fixture
def nodes_2d(rng):
    return random_nodes(rng, 40, 2)
