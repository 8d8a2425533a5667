from math import comb

import numpy as np
import pytest

from macrocoherence import states as S
from macrocoherence.errors import AsymmetricInput, TooLarge


def tensor_coherent(n, theta, phi):
    q = S.qubit(theta, phi)
    v = np.array([1.0 + 0j])
    for _ in range(n):
        v = np.kron(v, q)
    return v


def test_coherent_polar_and_small_cases():
    assert np.allclose(S.spin_coherent(5, 0.0).matrix[0, 0], 1)
    amp = S.coherent_amplitudes(2, np.pi / 2, 0.0)
    assert np.allclose(amp, [0.5, np.sqrt(2) / 2, 0.5])


def test_coherent_dicke_matches_projected_tensor():
    n, th, ph = 4, np.pi / 3, 0.7
    full = tensor_coherent(n, th, ph)
    proj = S.dicke_isometry(n).T @ full
    assert np.allclose(S.coherent_amplitudes(n, th, ph), proj, atol=1e-12)
    assert np.allclose(S.spin_coherent(n, th, ph, S.FULL).matrix, np.outer(full, full.conj()), atol=1e-12)


def test_coherent_large_n_is_normalised():
    amp = S.coherent_amplitudes(1000, 1.1, 0.3)
    assert np.linalg.norm(amp) == pytest.approx(1, abs=1e-10)


def test_binomials():
    assert S.binom(10, 3) == comb(10, 3)
    assert S.binom(100, 50) == pytest.approx(comb(100, 50), rel=1e-12)


def test_ghz():
    assert np.allclose(S.ghz(3, 0.0).matrix, S.spin_coherent(3, 0.0).matrix)
    psi = np.diag(S.ghz(3, np.pi / 2, 0.0, S.FULL).matrix).real
    assert np.count_nonzero(psi > 1e-14) == 2
    assert np.allclose(psi[[0, -1]], 0.5)
    back, leak = S.dicke_embed(S.dicke_embed(S.ghz(3, 1.0, 0.2), "dicke_to_full")[0], "full_to_dicke")
    assert leak == pytest.approx(0, abs=1e-14)
    assert np.allclose(back.matrix, S.ghz(3, 1.0, 0.2).matrix, atol=1e-12)


def test_product_states():
    assert np.allclose(S.product_state([(0, 0)] * 3).matrix[0, 0], 1)
    same = S.product_state([(0.4, 1.0)] * 3)
    assert np.allclose(same.matrix, S.spin_coherent(3, 0.4, 1.0, S.FULL).matrix, atol=1e-12)
    mixed = S.product_state([(0.1, 0.2), (2.0, -1.0), (np.pi, 0.5)])
    assert np.trace(mixed.matrix).real == pytest.approx(1, abs=1e-12)


def test_collective_spin_spectra():
    L = S.collective_spin(4)
    assert np.allclose(L.sector_values, [-2, -1, 0, 1, 2]) and L.nondegenerate
    assert np.allclose(S.collective_spin(1).matrix, np.diag([0.5, -0.5]))
    Lf = S.collective_spin(3, repr=S.FULL)
    sizes = {v: len(s) for v, s in zip(Lf.sector_values, Lf.sectors)}
    assert sizes[0.5] == 3 and sizes[1.5] == 1


def test_collective_spin_along_axis_has_same_spectrum():
    L = S.collective_spin(5, (1.0, 0.4))
    assert np.allclose(L.sector_values, np.arange(-2.5, 3))


def test_lowering_operator():
    assert np.allclose(S.lowering_operator(1, S.FULL), [[0, 0], [1, 0]])
    sm = S.lowering_operator(6)
    top = np.zeros(7)
    top[0] = 1
    assert abs((sm @ top)[1]) == pytest.approx(np.sqrt(6))
    w = S.dicke_isometry(4)
    assert np.allclose(w.T @ S.lowering_operator(4, S.FULL) @ w, S.lowering_operator(4), atol=1e-12)


def test_embedding_leakage():
    v = np.zeros(4, dtype=complex)
    v[1] = 1  # |01>
    st = S.QuantumState.from_vector(v, S.FULL, 2)
    with pytest.raises(AsymmetricInput):
        S.dicke_embed(st, "full_to_dicke")
    out, leak = S.dicke_embed(st, "full_to_dicke", max_leakage=1.0)
    assert leak == pytest.approx(0.5)
    assert np.allclose(out.matrix, np.diag([0, 1, 0]))


def test_operator_embedding_round_trip():
    sz = S.collective_spin(3).matrix
    full, leak = S.dicke_embed(sz, "dicke_to_full")
    assert leak == 0
    back, leak = S.dicke_embed(full, "full_to_dicke")
    assert leak < 1e-12
    assert np.allclose(back, sz)


def test_full_representation_size_guard():
    with pytest.raises(TooLarge):
        S.ghz(13, repr=S.FULL)


def test_observable_sectors_are_grouped():
    L = S.Observable(np.diag([0.0, 0.0, 1.0]))
    assert len(L.sectors) == 2 and not L.nondegenerate
    m = np.arange(9.0).reshape(3, 3)
    assert np.allclose(L.from_eigenbasis(L.to_eigenbasis(m)), m)
