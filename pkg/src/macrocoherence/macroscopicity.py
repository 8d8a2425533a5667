"""Weighted sums of mode coherences as measures of quantum macroscopicity.

Two summation conventions appear for weighted measures and both are kept:

* ``positive`` weights are summed over positive spacings only,
  ``M = sum_{w > 0} f(w) A^(w)``.  Power and g-derived weights use it, so that
  ``f(w) = w**2`` with the Hilbert-Schmidt modes gives the Wigner-Yanase skew
  information.
* ``full`` weights are summed over every nonzero spacing,
  ``M = sum_{w != 0} f(w) A^(w)``.  The scaled families use it.

Since ``A^(-w) = A^(w)``, a ``full`` weight ``f`` is the same measure as the
``positive`` weight ``2 f``.
"""
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from scipy import integrate

from .asymmetry import mode_profile, mode_spectrum
from .coherence import sqrt_state
from .errors import InvalidWeight, NegativeG, NonPositiveSigma
from .hermitian import as_matrix, bures, hs_norm_sq
from .states import Observable, QuantumState

POSITIVE = "positive"
FULL_SPECTRUM = "full"
TRACE_NORM = "tr"
HILBERT_SCHMIDT = "hs"


def _check_sigma(sigma):
    if not sigma > 0:
        raise NonPositiveSigma(f"sigma must be positive, got {sigma!r}")


@dataclass(frozen=True)
class WeightFunction:
    family: str
    evaluate: Callable
    convention: str
    params: dict = field(default_factory=dict)

    def __call__(self, omega):
        return self.evaluate(np.asarray(omega, dtype=float))

    def full_equivalent(self, omega):
        """Weight expressed in the full-spectrum convention."""
        f = self(omega)
        return f / 2 if self.convention == POSITIVE else f


def power(exponent=2.0):
    return WeightFunction("power", lambda w: np.abs(w) ** exponent, POSITIVE, {"exponent": exponent})


def gaussian_g(sigma):
    """``g(x) = x^2 (sqrt(pi) tau)^-1 exp(-x^2/tau^2)`` with ``tau = 1/(sqrt(2) sigma)``."""
    _check_sigma(sigma)
    tau = 1.0 / (np.sqrt(2.0) * sigma)
    return lambda x: x ** 2 * np.exp(-(x / tau) ** 2) / (np.sqrt(np.pi) * tau)


def sinc(u):
    u = np.asarray(u, dtype=float)
    out = np.ones_like(u)
    nz = u != 0
    out[nz] = np.sin(u[nz]) / u[nz]
    return out


def from_g(g=None, domain=(-np.inf, np.inf), grid=None, delta=False, epsabs=1e-10):
    """Weight ``f(w) = w^2 int_X sinc(w x / 2)^2 g(x) dx`` for ``g >= 0``.

    ``g`` is either a callable integrated adaptively over ``domain``, or samples
    on ``grid`` (composite Simpson), or ``delta=True`` for a point mass at
    ``x = 0`` (giving ``f(w) = w^2``).
    """
    if delta:
        return WeightFunction("from_g", lambda w: np.asarray(w, float) ** 2, POSITIVE, {"g": "delta"})
    if grid is not None:
        x = np.asarray(grid, dtype=float)
        gx = np.asarray(g(x) if callable(g) else g, dtype=float)
        if np.any(gx < 0):
            raise NegativeG("g must be nonnegative on the grid")

        def evaluate(w):
            w = np.asarray(w, dtype=float)
            vals = [wi ** 2 * integrate.simpson(sinc(wi * x / 2) ** 2 * gx, x=x) for wi in w.ravel()]
            return np.array(vals).reshape(w.shape)

        return WeightFunction("from_g", evaluate, POSITIVE, {"grid": (float(x[0]), float(x[-1]), len(x))})
    if not callable(g):
        raise InvalidWeight("from_g needs a callable g, sampled g on a grid, or delta=True")
    lo, hi = domain
    probe = np.linspace(max(lo, -50.0), min(hi, 50.0), 2001)
    if np.any(np.asarray(g(probe)) < 0):
        raise NegativeG("g takes negative values")

    def one(w):
        if w == 0:
            return 0.0
        val, _ = integrate.quad(lambda x: sinc(w * x / 2) ** 2 * g(x), lo, hi,
                                epsabs=epsabs, epsrel=1e-12, limit=500)
        return w ** 2 * val

    def evaluate(w):
        w = np.asarray(w, dtype=float)
        return np.array([one(float(wi)) for wi in w.ravel()]).reshape(w.shape)

    return WeightFunction("from_g", evaluate, POSITIVE, {"domain": domain})


def concave_scaled(sigma, base):
    """``w -> base(w^2 / sigma^2)`` summed over the full spectrum.

    ``base`` must be nonnegative, concave and nondecreasing with ``base(0) = 0``;
    this is checked on a sample grid.
    """
    _check_sigma(sigma)
    x = np.linspace(0.0, 50.0, 2001)
    y = np.asarray([base(xi) for xi in x], dtype=float)
    if abs(y[0]) > 1e-12:
        raise InvalidWeight("base(0) must be 0")
    if np.any(np.diff(y) < -1e-12):
        raise InvalidWeight("base must be nondecreasing")
    if np.any(np.diff(y, 2) > 1e-10):
        raise InvalidWeight("base must be concave")
    vbase = np.vectorize(base, otypes=[float])
    return WeightFunction("concave_scaled", lambda w: vbase(np.asarray(w, float) ** 2 / sigma ** 2),
                          FULL_SPECTRUM, {"sigma": sigma, "base": base})


def _scaled_base(x):
    return -np.expm1(-np.asarray(x) / 8.0)


def scaled(sigma):
    """``1 - exp(-w^2 / (8 sigma^2))`` summed over the full spectrum."""
    _check_sigma(sigma)
    return WeightFunction("scaled", lambda w: -np.expm1(-np.asarray(w, float) ** 2 / (8.0 * sigma ** 2)),
                          FULL_SPECTRUM, {"sigma": sigma, "base": _scaled_base})


def make_weight(family, **params):
    builders = {"power": power, "scaled": scaled, "from_g": from_g, "concave_scaled": concave_scaled}
    try:
        return builders[family](**params)
    except KeyError:
        raise InvalidWeight(f"unknown weight family {family!r}") from None


# -- measures -------------------------------------------------------------------------

@dataclass(frozen=True)
class ModeTerm:
    omega: float
    weight: float
    coherence: float
    contribution: float


@dataclass(frozen=True)
class MacroscopicityReport:
    value: float
    per_mode: list
    norm_kind: str
    monotone_weight: bool = True


def weighted_measure(rho, L: Observable, f: WeightFunction, norm_kind=HILBERT_SCHMIDT,
                     profile=None) -> MacroscopicityReport:
    if norm_kind not in (TRACE_NORM, HILBERT_SCHMIDT):
        raise ValueError(f"norm_kind must be {TRACE_NORM!r} or {HILBERT_SCHMIDT!r}")
    if profile is None:
        profile = mode_profile(rho, L, trace_norms=norm_kind == TRACE_NORM)
    coh = profile.a_hs if norm_kind == HILBERT_SCHMIDT else profile.a_tr
    omegas = profile.omegas
    keep = omegas > 0 if f.convention == POSITIVE else omegas != 0
    w = np.asarray(f(omegas[keep]), dtype=float)
    if np.any(w < 0) or not np.all(np.isfinite(w)):
        raise InvalidWeight("weights must be finite and nonnegative")
    contrib = w * coh[keep]
    terms = [ModeTerm(float(o), float(wi), float(c), float(t))
             for o, wi, c, t in zip(omegas[keep], w, coh[keep], contrib)]
    pos = omegas[keep] > 0
    monotone = bool(np.all(np.diff(w[pos]) >= -1e-15))
    return MacroscopicityReport(float(contrib.sum()), terms, norm_kind, monotone)


def m_hs(rho, L, f=None, profile=None):
    return weighted_measure(rho, L, f or power(2), HILBERT_SCHMIDT, profile).value


def m_tr(rho, L, f=None, profile=None):
    return weighted_measure(rho, L, f or power(2), TRACE_NORM, profile).value


def scaled_measure(rho, L: Observable, sigma, profile=None) -> MacroscopicityReport:
    return weighted_measure(rho, L, scaled(sigma), HILBERT_SCHMIDT, profile)


def m_sigma(rho, L, sigma, profile=None):
    return scaled_measure(rho, L, sigma, profile).value


def skew_information(rho, L: Observable) -> float:
    """Wigner-Yanase skew information ``-1/2 Tr [sqrt(rho), L]^2``."""
    s = sqrt_state(rho)
    lm = as_matrix(L)
    c = s @ lm - lm @ s
    # c is anti-Hermitian, so -Tr c^2 = ||c||_F^2
    return 0.5 * hs_norm_sq(c)


def skew_information_modes(rho, L: Observable, profile=None) -> float:
    """Same quantity as ``skew_information``, as the ``w^2/2`` weighted mode sum."""
    if profile is None:
        profile = mode_profile(rho, L, trace_norms=False)
    return float(np.sum(profile.omegas ** 2 / 2 * profile.a_hs))


def fuzzy_channel(rho, L: Observable, sigma) -> QuantumState:
    """Gaussian-smoothed measurement of ``L``.

    Integrating the smoothed Kraus operators in closed form damps the
    ``(m, n)`` sector block by ``exp(-(lambda_m - lambda_n)^2 / (8 sigma^2))``.
    """
    _check_sigma(sigma)
    lam = L.sector_values[L.labels]
    damp = np.exp(-(lam[:, None] - lam[None, :]) ** 2 / (8.0 * sigma ** 2))
    m = L.from_eigenbasis(damp * L.to_eigenbasis(as_matrix(rho)))
    if isinstance(rho, QuantumState):
        return rho.with_matrix(m)
    return QuantumState(m)


@dataclass(frozen=True)
class SandwichReport:
    lower: float
    value: float
    upper: float
    holds: bool


def sandwich_bounds(rho, L: Observable, sigma, slack=1e-9) -> SandwichReport:
    """Half the Bures distance to the fuzzy-measured state, ``M_sigma``, and its skew-information ceiling."""
    _check_sigma(sigma)
    lower = 0.5 * bures(rho, fuzzy_channel(rho, L, sigma))
    value = m_sigma(rho, L, sigma)
    upper = -np.expm1(-skew_information(rho, L) / (4.0 * sigma ** 2))
    return SandwichReport(float(lower), float(value), float(upper),
                          bool(lower - slack <= value <= upper + slack))


def separability_ceiling(n, l_max, sigma, base=None) -> float:
    """Upper bound on the scaled measure of any N-partite separable state.

    ``l_max`` is the largest eigenvalue gap of the local generators.  With
    ``base`` the concave function of a ``concave_scaled`` weight the bound is
    ``base(N l_max^2 / (2 sigma^2))``; the default is the scaled weight, for
    which this reads ``1 - exp(-N l_max^2 / (16 sigma^2))``.
    """
    if n < 1 or not l_max > 0:
        raise ValueError("need N >= 1 and l_max > 0")
    _check_sigma(sigma)
    x = n * l_max ** 2 / (2.0 * sigma ** 2)
    if base is None:
        return float(-np.expm1(-x / 8.0))
    return float(base(x))


def sqrt_n_log_n(n):
    """The cutoff ``sigma = sqrt(N ln N)``."""
    return float(np.sqrt(n * np.log(n)))
