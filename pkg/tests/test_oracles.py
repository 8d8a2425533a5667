import numpy as np
import pytest
from scipy import integrate

from macrocoherence import asymmetry as A, macroscopicity as M, oracles as O, states as S
from macrocoherence.errors import UnsupportedCombination


def test_erfc():
    assert O.erfc(0) == 1
    for x in (0.3, 1.7, 4.0):
        assert O.erfc(-x) == pytest.approx(2 - O.erfc(x), abs=1e-15)
    quad = 2 / np.sqrt(np.pi) * integrate.quad(lambda t: np.exp(-t ** 2), 1, np.inf, epsabs=1e-14)[0]
    assert O.erfc(1.0) == pytest.approx(quad, abs=1e-12)


def test_coherent_modes_small_cases():
    assert O.coherent_modes(2, np.pi / 2, 1, "tr") == pytest.approx(np.sqrt(2) / 2)
    assert O.coherent_modes(5, 0.0, 2, "hs") == 0
    assert O.coherent_modes(5, 0.0, 0, "hs") == pytest.approx(1)


@pytest.mark.parametrize("n", range(1, 11))
def test_coherent_modes_exact_sum_matches_numerics(n):
    th = 1.1
    p = A.mode_profile(S.spin_coherent(n, th), S.collective_spin(n))
    for w, tr, hs in zip(p.omegas, p.a_tr, p.a_hs):
        assert O.coherent_modes(n, th, w, "tr") == pytest.approx(tr, abs=1e-12)
        assert O.coherent_modes(n, th, w, "hs") == pytest.approx(hs, abs=1e-12)


def test_normal_approximation_against_exact_sum():
    for which in ("tr", "hs"):
        exact = O.coherent_modes(200, np.pi / 2, 14, which)
        approx = O.coherent_modes(200, np.pi / 2, 14, which, method=O.APPROX)
        assert approx == pytest.approx(exact, rel=0.02)


def test_coherent_m_tr_asymptotic():
    n = 400
    num = M.m_tr(S.spin_coherent(n, np.pi / 2), S.collective_spin(n))
    assert O.closed_form_measures("coherent", "m_tr", n=n, theta=np.pi / 2).value == pytest.approx(num, rel=0.05)


def test_closed_form_special_cases():
    n = 9
    tilted = O.closed_form_measures("ghz", "m_hs", n=n, theta=0.8, axis_theta=0.0).value
    assert tilted == pytest.approx(n ** 2 * np.sin(0.8) ** 2 / 4)
    plus = O.closed_form_measures("product", "m_hs", site_angles=[(np.pi / 2, 0.0)] * n).value
    assert plus == pytest.approx(n / 4)
    with pytest.raises(UnsupportedCombination):
        O.closed_form_measures("ghz", "m_hs", n=2, theta=1.0, axis_theta=0.5)
    with pytest.raises(UnsupportedCombination):
        O.closed_form_measures("coherent", "m_sigma", n=4, theta=1.0)


def test_dephased_ghz_form_matches_numerics():
    from macrocoherence.dynamics import dephased_ghz
    n, th, sig = 20, 1.0, 3.0
    for tau in (0.0, 1e-3, 5e-3):
        num = M.m_sigma(dephased_ghz(n, th, 0.0, tau), S.collective_spin(n), sig)
        cf = O.closed_form_measures("dephased_ghz", "m_sigma", n=n, theta=th, tau=tau, sigma=sig)
        assert cf.value == pytest.approx(num, rel=1e-10)


def test_tilted_ghz_numerics_full_and_dicke():
    for n, rep in ((5, S.FULL), (40, S.DICKE)):
        vt = 0.9
        num = M.m_hs(S.ghz(n, 1.2, 0.0, rep), S.collective_spin(n, (vt, 2.0), rep))
        assert num == pytest.approx(O.closed_form_measures("ghz", "m_hs", n=n, theta=1.2, axis_theta=vt).value, rel=1e-9)
