import numpy as np
import pytest

from macrocoherence import asymmetry as A, coherence, dynamics, states as S
from macrocoherence.errors import UnknownMode
from macrocoherence.states import Observable, QuantumState

from conftest import rand_state


def test_mode_spectra():
    assert np.allclose(A.mode_spectrum(S.collective_spin(3)).omegas, np.arange(-3, 4))
    assert np.allclose(A.mode_spectrum(Observable(np.diag([0.0, 1, 2]))).omegas, [-2, -1, 0, 1, 2])
    assert np.allclose(A.mode_spectrum(Observable(np.diag([0.0, 0, 1]))).omegas, [-1, 0, 1])
    with pytest.raises(UnknownMode):
        A.mode_spectrum(Observable(np.diag([0.0, 1, 2]))).index(0.5)


def test_mode_components(qutrit, rng):
    rho, L = qutrit
    c1 = A.mode_component(rho, L, 1.0).block
    want = np.zeros((3, 3))
    want[0, 1] = want[1, 2] = 1 / 3
    # the +1 mode is either the upper or the lower band depending on the sign convention
    assert np.allclose(c1, want) or np.allclose(c1, want.T)
    sigma = rand_state(4, rng)
    Lr = Observable(np.diag([0.0, 1, 1, 3]))
    assert np.allclose(sum(A.decompose(sigma, Lr).values()), sigma.matrix, atol=1e-12)
    diag = np.diag([0.1, 0.2, 0.7])
    assert np.allclose(A.mode_component(diag, L, 2.0).block, 0)


def test_qutrit_profile(qutrit):
    rho, L = qutrit
    p = A.mode_profile(rho, L)
    assert np.allclose(p.a_hs, [1 / 9, 2 / 9, 1 / 3, 2 / 9, 1 / 9], atol=1e-12)
    assert A.total_asymmetry(rho, L) == pytest.approx(2 / 3, abs=1e-12)
    assert A.mode_asymmetry(rho, L, 2.0)[1] == pytest.approx(1 / 9)


def test_ghz_modes():
    n, th = 6, 0.9
    p = A.mode_profile(S.ghz(n, th), S.collective_spin(n))
    top = p.omegas == n
    assert p.a_hs[top][0] == pytest.approx(np.sin(th) ** 2 / 4)
    assert p.a_tr[top][0] == pytest.approx(np.sin(th) / 2)
    assert np.allclose(p.a_hs[(p.omegas != 0) & (np.abs(p.omegas) != n)], 0)


def test_plus_pair_asymmetry_below_coherence():
    plus = np.array([1, 1]) / np.sqrt(2)
    rho = QuantumState.from_vector(np.kron(plus, plus), S.FULL, 2)
    L = S.collective_spin(2, repr=S.FULL)
    assert A.total_asymmetry(rho, L) == pytest.approx(5 / 8)
    assert coherence.c_a(rho).value == pytest.approx(3 / 4)


def test_free_states_have_no_asymmetry(rng):
    L = Observable(np.diag([0.0, 0, 1, 2]))
    block = np.zeros((4, 4), dtype=complex)
    block[:2, :2] = rand_state(2, rng).matrix * 0.6
    block[2, 2], block[3, 3] = 0.3, 0.1
    assert A.total_asymmetry(block, L) == pytest.approx(0, abs=1e-14)
    for x in (0.3, 2.0):
        assert np.allclose(A.translate(block, L, x).matrix, block)
    closest = A.closest_free_state(rand_state(4, rng), L)
    assert A.total_asymmetry(closest, L) == pytest.approx(0, abs=1e-12)


def test_translation_example():
    L = Observable(np.diag([0.5, -0.5]))
    plus = QuantumState.from_vector(np.array([1, 1]) / np.sqrt(2))
    minus = np.array([[1, -1], [-1, 1]]) / 2
    assert np.allclose(A.translate(plus, L, np.pi).matrix, minus)
    assert np.allclose(A.translate(plus, L, 0.0).matrix, plus.matrix)


def test_translation_preserves_modes(rng):
    L = Observable(np.diag([0.0, 1, 1, 2.5]))
    rho = rand_state(4, rng)
    p0 = A.mode_profile(rho, L)
    p1 = A.mode_profile(A.translate(rho, L, 1.3), L)
    assert np.allclose(p0.a_hs, p1.a_hs) and np.allclose(p0.a_tr, p1.a_tr)


def test_covariance_examples(qutrit):
    _, L = qutrit
    assert A.covariance_check(dynamics.partial_dephasing(L, [1, -1]).kraus(), L).max_violation < 1e-10
    assert A.covariance_check(dynamics.translation(L, 0.7), L).is_covariant
    q = Observable(np.diag([0.5, -0.5]))
    hadamard = np.array([[1, 1], [1, -1]]) / np.sqrt(2)
    assert not A.covariance_check([hadamard], q).is_covariant


def test_monotone_under_covariant_channels(rng):
    for i in range(40):
        d = int(rng.integers(2, 6))
        L = Observable(np.diag(rng.integers(0, 3, size=d).astype(float)))
        rho = rand_state(d, rng)
        ch = dynamics.random_covariant_channel(L, seed=i)
        assert A.covariance_check(ch, L, samples=4).is_covariant
        p0, p1 = A.mode_profile(rho, L), A.mode_profile(ch(rho), L)
        assert p1.total("hs") <= p0.total("hs") + 1e-9
        assert np.all(p1.a_tr <= p0.a_tr + 1e-9)
        assert p1.total("tr") <= p0.total("tr") + 1e-9
