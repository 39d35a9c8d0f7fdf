import numpy as np
import pytest

from mnnoma.numerology import Numerology, make_pair, pair_from_indices


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


@pytest.fixture(scope="session")
def pair45():
    return pair_from_indices(4, 5)


@pytest.fixture(scope="session")
def tiny_pair():
    """Off-catalog pair small enough for brute force: N1=8/ncp1=2, N2=4/ncp2=1."""
    return make_pair(Numerology(0, 8, 2, 1.0), Numerology(1, 4, 1, 2.0))


def crandn(rng, *shape):
    return (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / np.sqrt(2)
