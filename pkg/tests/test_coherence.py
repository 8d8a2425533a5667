import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from macrocoherence import coherence as C, dynamics, hermitian
from macrocoherence.errors import BasisNotOrthonormal
from macrocoherence.states import QuantumState

from conftest import rand_state, rand_unitary


def test_examples(qutrit):
    rho, _ = qutrit
    assert C.c_a(np.diag([0.2, 0.8])).value == pytest.approx(0, abs=1e-14)
    plus = QuantumState.from_vector(np.array([1, 1]) / np.sqrt(2))
    assert C.c_a(plus).value == pytest.approx(0.5)
    assert C.c_a(rho).value == pytest.approx(2 / 3)
    assert C.c_l1(np.diag([0.2, 0.8])) == 0
    assert C.c_l1(plus) == pytest.approx(1)
    assert C.c_l1(rho) == pytest.approx(2)


def test_basis_argument(rng):
    plus = QuantumState.from_vector(np.array([1, 1]) / np.sqrt(2))
    hadamard = np.array([[1, 1], [1, -1]]) / np.sqrt(2)
    assert C.c_a(plus, hadamard).value == pytest.approx(0, abs=1e-14)
    with pytest.raises(BasisNotOrthonormal):
        C.c_a(plus, np.array([[1, 1], [0, 1]]))


@settings(max_examples=60, deadline=None)
@given(st.integers(2, 6), st.integers(0, 2 ** 32 - 1))
def test_two_routes_agree(dim, seed):
    rng = np.random.default_rng(seed)
    r = C.c_a(rand_state(dim, rng, int(rng.integers(1, dim + 1))))
    assert r.discrepancy < 1e-10
    assert 0 <= r.value < 1


def test_closest_incoherent_state_maximises_affinity(rng):
    """Brute-force check of the maximiser against random diagonal states."""
    rho = rand_state(4, rng)
    r = C.c_a(rho)
    best = hermitian.affinity(rho, np.diag(r.closest_incoherent))
    for _ in range(2000):
        p = rng.dirichlet(np.ones(4) * 0.5)
        assert hermitian.affinity(rho, np.diag(p)) <= best + 1e-12


def test_invariant_under_diagonal_unitaries(rng):
    rho = rand_state(4, rng)
    u = np.diag(np.exp(1j * rng.uniform(0, 2 * np.pi, 4)))
    assert C.c_a(u @ rho.matrix @ u.conj().T).value == pytest.approx(C.c_a(rho).value, abs=1e-12)


def test_basis_change_consistency(rng):
    rho = rand_state(3, rng)
    u = rand_unitary(3, rng)
    moved = u @ rho.matrix @ u.conj().T
    assert C.c_a(moved, u).value == pytest.approx(C.c_a(rho).value, abs=1e-10)


def test_monotone_under_incoherent_channels(rng):
    for i in range(60):
        d = int(rng.integers(2, 6))
        rho = rand_state(d, rng)
        ch = dynamics.random_incoherent_channel(d, int(rng.integers(1, 4)), seed=i)
        c0 = C.c_a(rho).value
        assert C.c_a(ch(rho)).value <= c0 + 1e-9
        assert sum(p * C.c_a(s).value for p, s in ch.branches(rho)) <= c0 + 1e-9


def test_convex(rng):
    a, b = rand_state(3, rng), rand_state(3, rng)
    mix = 0.3 * a.matrix + 0.7 * b.matrix
    assert C.c_a(mix).value <= 0.3 * C.c_a(a).value + 0.7 * C.c_a(b).value + 1e-12
