"""Dense Hermitian linear algebra used by every measure in the package.

Matrices are plain complex ``numpy`` arrays; validation happens at the
function boundary.
"""
from typing import NamedTuple

import numpy as np

from . import tolerances as tol
from .errors import DimensionMismatch, NotHermitian, NotPSD


class EigenDecomposition(NamedTuple):
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    def reconstruct(self):
        v = self.eigenvectors
        return (v * self.eigenvalues) @ v.conj().T


def as_matrix(x) -> np.ndarray:
    """Return the matrix carried by ``x`` (a state, an observable or an array)."""
    m = getattr(x, "matrix", x)
    m = np.asarray(m)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise DimensionMismatch(f"expected a square matrix, got shape {m.shape}")
    return m


def check_hermitian(h, atol=tol.HERMITIAN_ATOL):
    h = as_matrix(h)
    err = np.abs(h - h.conj().T).max() if h.size else 0.0
    if err > atol:
        raise NotHermitian(f"matrix deviates from its adjoint by {err:.3g} > {atol:.1g}")
    return h


def hermitize(h):
    h = np.asarray(h)
    return 0.5 * (h + h.conj().T)


def eigh(h) -> EigenDecomposition:
    """Eigendecomposition with ascending real eigenvalues."""
    h = check_hermitian(h)
    w, v = np.linalg.eigh(hermitize(h))
    return EigenDecomposition(w, v)


def psd_eigh(rho) -> EigenDecomposition:
    """``eigh`` for a positive semidefinite matrix.

    Negative dust is clamped to 0, and so are eigenvalues below the numerical
    rank threshold ``dim * eps * max(w)``: their square roots would otherwise
    inject ~1e-8 noise into ``sqrt(rho)`` for rank-deficient states.
    """
    w, v = eigh(rho)
    if w.size and w[0] < tol.NOT_PSD_FLOOR:
        raise NotPSD(f"smallest eigenvalue {w[0]:.3g} is below {tol.NOT_PSD_FLOOR:g}")
    floor = len(w) * np.finfo(float).eps * max(w[-1], 0.0) if w.size else 0.0
    return EigenDecomposition(np.where(w > floor, w, 0.0), v)


def sqrt_psd(rho) -> np.ndarray:
    w, v = psd_eigh(rho)
    return hermitize((v * np.sqrt(w)) @ v.conj().T)


def singular_values(m) -> np.ndarray:
    m = np.asarray(m)
    if not m.size:
        return np.zeros(0)
    return np.linalg.svd(m, compute_uv=False)


def trace_norm(m) -> float:
    """Sum of singular values.

    Uses the bidiagonalisation-based SVD: small singular values of a
    rank-deficient matrix come out with absolute error ~eps*||m||, whereas the
    square root of the spectrum of m^dagger m inflates them to ~sqrt(eps)*||m||.
    """
    m = as_matrix(m)
    if not m.size:
        return 0.0
    return float(singular_values(m).sum())


def hs_norm_sq(m) -> float:
    m = np.asarray(m)
    return float(np.vdot(m, m).real)


def partial_trace(rho, dims, keep):
    """Trace out every subsystem of ``rho`` whose index is not in ``keep``."""
    rho = as_matrix(rho)
    dims = list(dims)
    if int(np.prod(dims)) != rho.shape[0]:
        raise DimensionMismatch(f"subsystem dims {dims} do not multiply to {rho.shape[0]}")
    keep = sorted(keep)
    n = len(dims)
    t = rho.reshape(dims + dims)
    for ax in reversed(range(n)):
        if ax not in keep:
            t = np.trace(t, axis1=ax, axis2=ax + t.ndim // 2)
    d = int(np.prod([dims[k] for k in keep]))
    return t.reshape(d, d)


# -- overlaps between density matrices ------------------------------------------------

def _pair(rho, tau):
    a, b = as_matrix(rho), as_matrix(tau)
    if a.shape != b.shape:
        raise DimensionMismatch(f"state dimensions differ: {a.shape} vs {b.shape}")
    return a, b


def _sqrt(x):
    # pure states carry a hint that lets us skip the eigensolver
    if getattr(x, "pure", False):
        return as_matrix(x)
    return sqrt_psd(x)


def affinity(rho, tau) -> float:
    """``Tr sqrt(rho) sqrt(tau)``."""
    _pair(rho, tau)
    a = np.vdot(_sqrt(rho), _sqrt(tau)).real
    return float(min(max(a, 0.0), 1.0))


def fidelity(rho, tau) -> float:
    """Uhlmann fidelity ``(Tr |sqrt(rho) sqrt(tau)|)^2``."""
    _pair(rho, tau)
    f = trace_norm(_sqrt(rho) @ _sqrt(tau)) ** 2
    return float(min(max(f, 0.0), 1.0))


def hellinger(rho, tau) -> float:
    return 1.0 - affinity(rho, tau)


def bures(rho, tau) -> float:
    return 2.0 - 2.0 * np.sqrt(fidelity(rho, tau))


OVERLAPS = {
    "affinity": affinity,
    "fidelity": fidelity,
    "hellinger": hellinger,
    "bures": bures,
}


def state_overlap(rho, tau, kind="affinity") -> float:
    try:
        fn = OVERLAPS[kind.lower()]
    except KeyError:
        raise ValueError(f"unknown overlap kind {kind!r}; choose from {sorted(OVERLAPS)}") from None
    return fn(rho, tau)
