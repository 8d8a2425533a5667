import numpy as np
import pytest

from macrocoherence import asymmetry as A, coherence, dynamics as D, macroscopicity as M, states as S
from macrocoherence.errors import ModesNotSymmetric, NotCompletelyPositive, NotTracePreserving, StepTooLarge, UnknownMode
from macrocoherence.states import Observable

from conftest import rand_state


def test_stationary_states():
    n = 5
    a = S.collective_spin(n).matrix
    top = S.spin_coherent(n, 0.0)
    traj = D.lindblad_evolve(top, D.LindbladSpec(a, 1e-3, 50))
    assert np.allclose(traj.states[-1].matrix, top.matrix)
    down = S.dicke_state(n, n)
    traj = D.lindblad_evolve(down, D.LindbladSpec(S.lowering_operator(n), 1e-3, 50))
    assert np.allclose(traj.states[-1].matrix, down.matrix)


def test_dephasing_keeps_populations_and_decays_coherence():
    n, th = 12, 1.0
    a = S.collective_spin(n).matrix
    times = np.arange(0, 11) * 1e-3
    out = D.evolve_to(S.ghz(n, th), a, times, 1e-4)
    for t, s in zip(times, out):
        assert np.allclose(np.diag(s.matrix), np.diag(S.ghz(n, th).matrix), atol=1e-12)
        assert abs(s.matrix[0, -1]) == pytest.approx(np.sin(th) / 2 * np.exp(-n ** 2 * t / 2), rel=1e-6)
        assert np.allclose(s.matrix, D.dephased_ghz(n, th, 0.0, t).matrix, atol=1e-9)


def test_dicke_and_full_dissipation_agree():
    n = 4
    times = np.linspace(0, 1.0, 5)
    dk = D.evolve_to(S.spin_coherent(n, 2.0, 0.3), S.lowering_operator(n), times, 1e-3)
    fl = D.evolve_to(S.spin_coherent(n, 2.0, 0.3, S.FULL), S.lowering_operator(n, S.FULL), times, 1e-3)
    for x, y in zip(dk, fl):
        back, leak = S.dicke_embed(y, "full_to_dicke")
        assert leak < 1e-9
        assert np.allclose(x.matrix, back.matrix, atol=1e-7)


def test_dephased_ghz_scaled_measure():
    n, sig = 50, M.sqrt_n_log_n(50)
    L = S.collective_spin(n)
    ratio = M.m_sigma(D.dephased_ghz(n, np.pi / 2, 0.0, 1e-3), L, sig) / M.m_sigma(S.ghz(n), L, sig)
    # |(sqrt rho)_{0N}|^2 of the 2x2 active block; frozen from the closed form 1 - sqrt(1 - e^{-N^2 tau})
    assert ratio == pytest.approx(0.04192119250235937, rel=1e-9)
    assert M.m_sigma(D.dephased_ghz(n, np.pi / 2, 0.0, 1.0), L, sig) == pytest.approx(0, abs=1e-12)
    assert D.dephased_ghz(n, 0.7, 0.1, 0.0).pure


def test_step_guards():
    a = S.collective_spin(40).matrix
    with pytest.raises(StepTooLarge):
        D.lindblad_evolve(S.ghz(40), D.LindbladSpec(a, 1.0, 1))
    with pytest.raises(ValueError):
        D.LindbladSpec(a, -1.0, 1)
    dt = D.default_dt(a, 7e-4)
    assert dt <= 0.01 / 400 and (7e-4 / dt) == pytest.approx(round(7e-4 / dt))


def test_decay_curves_monotone_and_ordered():
    n = 10
    thetas = (np.pi / 2, np.pi / 4, np.pi / 8)
    sig = M.sqrt_n_log_n(n)
    L = S.collective_spin(n)
    for a, tmax in ((S.collective_spin(n).matrix, 0.05), (S.lowering_operator(n), 0.3)):
        times = np.linspace(0, tmax, 11)
        curves = np.array([[M.m_sigma(s, L, sig) for s in D.evolve_to(S.ghz(n, t), a, times, tmax / 500)]
                           for t in thetas])
        assert np.all(np.diff(curves, axis=1) <= 1e-9)
        assert np.allclose(curves[:, 0] / np.sin(thetas) ** 2, curves[0, 0])


def test_partial_dephasing(qutrit, rng):
    rho, L = qutrit
    out = D.partial_dephasing(L, [1, -1])(rho).matrix
    want = np.diag([1, 1, 1]) / 3 + np.fliplr(np.diag([1, 0, 1])) / 3
    assert np.allclose(out, want)
    sigma = rand_state(3, rng)
    assert np.allclose(D.partial_dephasing(L, [])(sigma).matrix, sigma.matrix)
    killed = D.partial_dephasing(L, [1, -1, 2, -2])
    assert A.total_asymmetry(killed(sigma), L) == pytest.approx(0, abs=1e-14)
    with pytest.raises(ModesNotSymmetric):
        D.partial_dephasing(L, [1])
    with pytest.raises(UnknownMode):
        D.partial_dephasing(L, [0])
    # killing only +-2 on a qutrit is not completely positive
    with pytest.raises(NotCompletelyPositive):
        D.partial_dephasing(L, [2, -2]).kraus()


def test_kraus_channel_validation():
    with pytest.raises(NotTracePreserving):
        D.KrausChannel([np.eye(2) * 0.5])
    ch = D.compose(D.KrausChannel([np.eye(2)]), D.mixture([D.KrausChannel([np.eye(2)]), D.KrausChannel([np.diag([1, -1])])], [0.5, 0.5]))
    assert np.allclose(ch(np.full((2, 2), 0.5)), np.eye(2) / 2)


def test_random_incoherent_channels(rng):
    for i in range(100):
        d = int(rng.integers(2, 6))
        ch = D.random_incoherent_channel(d, int(rng.integers(1, 5)), seed=i)
        assert np.allclose(sum(k.conj().T @ k for k in ch.operators), np.eye(d), atol=1e-10)
        p = rng.dirichlet(np.ones(d))
        out = ch(np.diag(p))
        assert np.allclose(out, np.diag(np.diag(out)))
        for _, branch in ch.branches(np.diag(p)):
            assert coherence.c_a(branch).value < 1e-12


def test_random_covariant_channels_are_covariant(rng):
    for i in range(30):
        d = int(rng.integers(2, 6))
        L = Observable(np.diag(rng.normal(size=d).round(1)))
        ch = D.random_covariant_channel(L, seed=i)
        assert A.covariance_check(ch, L, samples=6, seed=i).max_violation < 1e-8
