import numpy as np
import pytest

from macrocoherence.asymmetry import random_density_matrix
from macrocoherence.states import Observable, QuantumState


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


@pytest.fixture
def qutrit():
    """Uniform-superposition qutrit with L = diag(0, 1, 2)."""
    L = Observable(np.diag([0.0, 1.0, 2.0]))
    rho = QuantumState(np.full((3, 3), 1 / 3, dtype=complex), pure=True)
    return rho, L


def rand_state(dim, rng, rank=None):
    return QuantumState(random_density_matrix(dim, rng, rank))


def rand_unitary(dim, rng):
    q, r = np.linalg.qr(rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim)))
    return q * (np.diag(r) / np.abs(np.diag(r)))


def rand_hermitian(dim, rng):
    g = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    return (g + g.conj().T) / 2
