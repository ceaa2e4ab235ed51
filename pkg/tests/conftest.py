import numpy as np
import pytest

from bellsep import ensemble


def random_hermitian(rng, n, scale=1.0):
    x = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    return scale * (x + x.conj().T) / 2


def random_density(rng, n):
    x = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    rho = x @ x.conj().T
    return rho / np.trace(rho).real


def bell_states(p, n, seed):
    return list(ensemble.iter_bell_diagonal(p, n, seed))


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)
