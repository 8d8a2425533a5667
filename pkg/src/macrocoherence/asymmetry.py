"""Modes of asymmetry with respect to an observable ``L``.

A density matrix splits into mode components ``rho^(w)`` that collect the
blocks ``P_m rho P_n`` with ``lambda_m - lambda_n = w``.  Everything here works
on degenerate sectors rather than individual eigenvectors, so results do not
depend on the basis chosen inside a degenerate eigenspace.
"""
from dataclasses import dataclass

import numpy as np

from . import tolerances as tol
from .coherence import sqrt_state
from .errors import NotTracePreserving, UnknownMode
from .hermitian import as_matrix, hs_norm_sq, psd_eigh, singular_values
from .states import Observable, QuantumState


@dataclass(frozen=True)
class ModeSpectrum:
    omegas: np.ndarray          # ascending, symmetric about 0
    pair_index: np.ndarray      # [m, n] -> index into omegas of lambda_m - lambda_n
    tolerance: float

    @property
    def zero(self):
        return len(self.omegas) // 2

    @property
    def positive(self):
        return self.omegas[self.zero + 1:]

    def index(self, omega):
        i = int(np.argmin(np.abs(self.omegas - omega)))
        if abs(self.omegas[i] - omega) > max(self.tolerance, 1e-12 * abs(omega)):
            raise UnknownMode(f"{omega!r} is not an eigenvalue spacing of the observable")
        return i


@dataclass(frozen=True)
class ModeComponent:
    omega: float
    block: np.ndarray


def mode_spectrum(L: Observable) -> ModeSpectrum:
    cached = getattr(L, "_mode_spectrum", None)
    if cached is not None:
        return cached
    vals = L.sector_values
    s = len(vals)
    diffs = vals[:, None] - vals[None, :]
    lower = np.tril_indices(s, -1)          # m > n, so differences are positive
    pos = diffs[lower]
    order = np.argsort(pos, kind="stable")
    sorted_pos = pos[order]
    group = np.concatenate([[0], np.cumsum(np.diff(sorted_pos) > L.tolerance)]) if pos.size else np.zeros(0, int)
    n_pos = int(group[-1]) + 1 if pos.size else 0
    reps = np.bincount(group, weights=sorted_pos, minlength=n_pos) / np.maximum(np.bincount(group, minlength=n_pos), 1)
    omegas = np.concatenate([-reps[::-1], [0.0], reps])
    zero = n_pos
    idx = np.full((s, s), zero, dtype=int)
    pos_idx = np.empty(pos.size, dtype=int)
    pos_idx[order] = group
    idx[lower] = zero + 1 + pos_idx
    idx[lower[1], lower[0]] = zero - 1 - pos_idx
    spec = ModeSpectrum(omegas, idx, L.tolerance)
    L._mode_spectrum = spec
    return spec


def _entry_modes(L):
    spec = mode_spectrum(L)
    return spec, spec.pair_index[L.labels[:, None], L.labels[None, :]]


def mode_component(rho, L: Observable, omega) -> ModeComponent:
    """``rho^(omega)`` (or the same projection of any square matrix, e.g. sqrt(rho))."""
    spec, modes = _entry_modes(L)
    i = spec.index(omega)
    r = L.to_eigenbasis(as_matrix(rho))
    return ModeComponent(float(spec.omegas[i]), L.from_eigenbasis(np.where(modes == i, r, 0)))


def decompose(rho, L: Observable):
    """All mode components, keyed by omega."""
    spec, modes = _entry_modes(L)
    r = L.to_eigenbasis(as_matrix(rho))
    return {float(w): L.from_eigenbasis(np.where(modes == i, r, 0)) for i, w in enumerate(spec.omegas)}


@dataclass(frozen=True)
class ModeProfile:
    """Per-mode coherences ``A_tr^(w)`` and ``A_HS^(w)`` for every ``w`` in the spectrum."""
    omegas: np.ndarray
    a_tr: np.ndarray | None
    a_hs: np.ndarray

    @property
    def zero(self):
        return len(self.omegas) // 2

    def total(self, kind="hs"):
        a = self.a_hs if kind == "hs" else self.a_tr
        return float(a.sum() - a[self.zero])


def _block_trace_norms(r, L, spec):
    """Trace norm of every mode component of ``r`` (given in L's eigenbasis).

    For fixed omega each row sector pairs with at most one column sector, so
    ``r^(omega)`` is a block-permutation matrix and its singular values are
    the union of those of its blocks.
    """
    out = np.zeros(len(spec.omegas))
    if L.nondegenerate:
        # 1x1 blocks: singular values are the entry moduli
        return np.bincount(spec.pair_index.ravel(), weights=np.abs(r).ravel(), minlength=len(out))
    for m, sm in enumerate(L.sectors):
        for n, sn in enumerate(L.sectors):
            out[spec.pair_index[m, n]] += singular_values(r[np.ix_(sm, sn)]).sum()
    return out


def mode_profile(rho, L: Observable, trace_norms=True) -> ModeProfile:
    spec, modes = _entry_modes(L)
    s = L.to_eigenbasis(sqrt_state(rho))
    a_hs = np.bincount(modes.ravel(), weights=(np.abs(s) ** 2).ravel(), minlength=len(spec.omegas))
    a_tr = None
    if trace_norms:
        r = L.to_eigenbasis(as_matrix(rho))
        a_tr = _block_trace_norms(r, L, spec)
    return ModeProfile(spec.omegas.copy(), a_tr, a_hs)


def mode_asymmetry(rho, L: Observable, omega):
    """``(A_tr^(omega), A_HS^(omega))``."""
    spec = mode_spectrum(L)
    i = spec.index(omega)
    prof = mode_profile(rho, L)
    return float(prof.a_tr[i]), float(prof.a_hs[i])


def total_asymmetry(rho, L: Observable) -> float:
    """Interference weight of ``sqrt(rho)`` between distinct eigenvalues of ``L``."""
    return mode_profile(rho, L, trace_norms=False).total("hs")


def closest_free_state(rho, L: Observable) -> QuantumState:
    """Covariant state maximising the affinity with ``rho``.

    Each sector block of ``sqrt(rho)`` is diagonalised; the free state is
    diagonal in that basis with weights proportional to the squared block
    eigenvalues, so ``1 - A(rho, sigma)^2`` equals the total asymmetry.
    """
    s = L.to_eigenbasis(sqrt_state(rho))
    d = L.dim
    vecs = np.zeros((d, d), dtype=complex)
    weights = np.zeros(d)
    for sec in L.sectors:
        w, v = psd_eigh(s[np.ix_(sec, sec)])
        vecs[np.ix_(sec, sec)] = v
        weights[sec] = w ** 2
    weights /= weights.sum()
    sigma = (vecs * weights) @ vecs.conj().T
    m = L.from_eigenbasis(sigma)
    return QuantumState(m, getattr(rho, "repr", "generic"), getattr(rho, "n", None))


def translate(rho, L: Observable, x) -> QuantumState:
    """``e^{-ixL} rho e^{ixL}`` as phases ``e^{-i omega x}`` on the mode components."""
    lam = L.sector_values[L.labels]
    phase = np.exp(-1j * x * (lam[:, None] - lam[None, :]))
    m = L.from_eigenbasis(phase * L.to_eigenbasis(as_matrix(rho)))
    if isinstance(rho, QuantumState):
        return rho.with_matrix(m, pure=rho.pure)
    return QuantumState(m)


# -- covariance of channels -----------------------------------------------------------

def kraus_operators(channel):
    ops = getattr(channel, "operators", channel)
    return [np.asarray(k, dtype=complex) for k in ops]


def apply_kraus(ops, x):
    x = as_matrix(x)
    return sum(k @ x @ k.conj().T for k in ops)


def check_trace_preserving(ops, atol=tol.COMPLETENESS_ATOL):
    d = ops[0].shape[1]
    err = np.abs(sum(k.conj().T @ k for k in ops) - np.eye(d)).max()
    if err > atol:
        raise NotTracePreserving(f"sum K^dagger K deviates from identity by {err:.3g}")
    return err


@dataclass(frozen=True)
class CovarianceReport:
    max_violation: float
    is_covariant: bool


def random_density_matrix(dim, rng, rank=None):
    rank = dim if rank is None else rank
    g = rng.normal(size=(dim, rank)) + 1j * rng.normal(size=(dim, rank))
    rho = g @ g.conj().T
    return rho / np.trace(rho).real


def covariance_check(channel, L: Observable, samples=20, seed=0) -> CovarianceReport:
    """Sampled test of ``E(rho^(w)) == E(rho)^(w)`` over random pure and mixed states."""
    ops = kraus_operators(channel)
    check_trace_preserving(ops)
    rng = np.random.default_rng(seed)
    worst = 0.0
    for t in range(samples):
        rho = random_density_matrix(L.dim, rng, rank=1 if t % 2 == 0 else None)
        out_modes = decompose(apply_kraus(ops, rho), L)
        for w, comp in decompose(rho, L).items():
            diff = apply_kraus(ops, comp) - out_modes[w]
            worst = max(worst, np.sqrt(hs_norm_sq(diff)))
    return CovarianceReport(float(worst), bool(worst < tol.COVARIANCE_ATOL))
