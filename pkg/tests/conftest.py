import numpy as np
import pytest

from meanking import build_mub, build_setup, build_vaa_basis


@pytest.fixture(scope="session")
def mub_of():
    cache = {}

    def get(dim):
        if dim not in cache:
            cache[dim] = build_mub(dim)
        return cache[dim]

    return get


@pytest.fixture(scope="session")
def vaa_of(mub_of):
    cache = {}

    def get(dim):
        if dim not in cache:
            cache[dim] = build_vaa_basis(dim, mub_of(dim))
        return cache[dim]

    return get


@pytest.fixture(scope="session")
def setup_of():
    cache = {}

    def get(dim):
        if dim not in cache:
            cache[dim] = build_setup(dim)
        return cache[dim]

    return get


def random_state(dim, rng):
    amps = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    return amps / np.linalg.norm(amps)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
