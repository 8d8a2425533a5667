"""Closed-form mode coherences and measures for spin-coherent, GHZ and product states.

These serve as independent checks of the numerical pipeline.  Results
obtained from a normal approximation of the binomial distribution are tagged
``approx`` and should only be compared within a tolerance band.
"""
from dataclasses import dataclass

import numpy as np
from scipy import special

from .errors import UnsupportedCombination
from .states import axis_vector, log_binom

EXACT = "exact"
APPROX = "approx"


@dataclass(frozen=True)
class ClosedForm:
    name: str
    params: dict
    value: float
    method: str


def erfc(x):
    """Complementary error function ``2/sqrt(pi) int_x^inf exp(-t^2) dt``."""
    return special.erfc(x)


def _log_cs(theta):
    c, s = abs(np.cos(theta / 2)), abs(np.sin(theta / 2))
    with np.errstate(divide="ignore"):
        return np.log(c), np.log(s)


def coherent_modes(n, theta, omega, which="tr", method=EXACT):
    """``A_tr^(omega)`` or ``A_HS^(omega)`` of the spin-coherent state w.r.t. ``S_z``."""
    w = abs(int(round(omega)))
    if abs(abs(omega) - w) > 1e-9 or w > n:
        return 0.0
    if which not in ("tr", "hs"):
        raise UnsupportedCombination(f"unknown norm {which!r}")
    if method == APPROX:
        s2 = np.sin(theta) ** 2
        if s2 == 0:
            return 0.0
        shift = w - 2 * n * np.sin(theta / 2) ** 2
        if which == "tr":
            return float(0.5 * np.exp(-w ** 2 / (2 * n * s2)) * erfc(shift / np.sqrt(2 * n * s2)))
        return float(np.exp(-w ** 2 / (n * s2)) * erfc(shift / np.sqrt(n * s2)) / (2 * np.sqrt(np.pi * n * s2)))
    k = np.arange(w, n + 1)
    lc, ls = _log_cs(theta)
    pc, ps = 2 * n - 2 * k + w, 2 * k - w
    with np.errstate(invalid="ignore"):
        log_t = (0.5 * (log_binom(n, k) + log_binom(n, k - w))
                 + np.where(pc == 0, 0.0, pc * lc) + np.where(ps == 0, 0.0, ps * ls))
    if which == "hs":
        log_t = 2 * log_t
    return float(np.exp(log_t[np.isfinite(log_t)]).sum())


def _need(params, *names):
    missing = [p for p in names if params.get(p) is None]
    if missing:
        raise UnsupportedCombination(f"missing parameters: {', '.join(missing)}")


def closed_form_measures(family, measure, **p) -> ClosedForm:
    """Closed forms with ``f(w) = w^2`` for ``m_tr``/``m_hs`` and the scaled weight for ``m_sigma``.

    Families: ``coherent`` (n, theta), ``ghz`` (n, theta, optional
    axis_theta), ``product`` (site_angles, optional axis), and
    ``dephased_ghz`` (n, theta, tau).  All observables are collective spins,
    along ``z`` unless an axis is given.
    """
    key = (family, measure)
    th = p.get("theta")
    if key == ("coherent", "m_hs"):
        _need(p, "n", "theta")
        return ClosedForm("coherent_m_hs", p, p["n"] * np.sin(th) ** 2 / 4, EXACT)
    if key == ("coherent", "m_tr"):
        _need(p, "n", "theta")
        return ClosedForm("coherent_m_tr", p, np.sqrt(np.pi / 2) * p["n"] ** 1.5 * abs(np.sin(th)) ** 3, APPROX)
    if key == ("coherent", "m_sigma"):
        _need(p, "n", "theta", "sigma")
        v = 1 - (1 + p["n"] * np.sin(th) ** 2 / (8 * p["sigma"] ** 2)) ** -0.5
        return ClosedForm("coherent_m_sigma", p, v, APPROX)
    if family == "ghz":
        _need(p, "n", "theta")
        n = p["n"]
        vt = p.get("axis_theta", 0.0)
        if measure == "m_hs":
            if vt != 0.0 and n <= 2:
                raise UnsupportedCombination("the tilted-axis GHZ form needs N > 2")
            v = n ** 2 * np.sin(th) ** 2 * np.cos(vt) ** 2 / 4 + n * np.sin(vt) ** 2 / 4
            return ClosedForm("ghz_m_hs", p, v, EXACT)
        if vt != 0.0:
            raise UnsupportedCombination(f"{measure} of GHZ has a closed form only along z")
        if measure == "m_tr":
            return ClosedForm("ghz_m_tr", p, n ** 2 * abs(np.sin(th)) / 2, EXACT)
        if measure == "m_sigma":
            _need(p, "sigma")
            v = 0.5 * np.sin(th) ** 2 * -np.expm1(-n ** 2 / (8 * p["sigma"] ** 2))
            return ClosedForm("ghz_m_sigma", p, v, EXACT)
    if key == ("product", "m_hs"):
        _need(p, "site_angles")
        nvec = axis_vector(*p.get("axis", (0.0, 0.0)))
        cos_big = np.array([axis_vector(t, f) @ nvec for t, f in p["site_angles"]])
        return ClosedForm("product_m_hs", p, float(np.sum(1 - cos_big ** 2) / 4), EXACT)
    if key == ("dephased_ghz", "m_sigma"):
        _need(p, "n", "theta", "tau", "sigma")
        n = p["n"]
        e = np.exp(-n ** 2 * p["tau"] / 2)
        # |(sqrt rho)_{0N}|^2 of the 2x2 active block, via sqrt(M) = (M + sqrt(det) I) / sqrt(tr + 2 sqrt(det))
        a_hs = np.sin(th) ** 2 / 4 * e ** 2 / (1 + abs(np.sin(th)) * np.sqrt(1 - e ** 2))
        v = 2 * -np.expm1(-n ** 2 / (8 * p["sigma"] ** 2)) * a_hs
        return ClosedForm("dephased_ghz_m_sigma", p, v, EXACT)
    raise UnsupportedCombination(f"no closed form for {family!r} with {measure!r}")
