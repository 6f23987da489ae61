import numpy as np
import pytest


def random_hermitian(rng, n):
    a = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    return (a + a.conj().T) / 2


@pytest.fixture
def nprng():
    return np.random.default_rng(20240611)
