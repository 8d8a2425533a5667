"""Basis-dependent coherence: the affinity-based measure and the l1 norm."""
from dataclasses import dataclass
import logging

import numpy as np

from . import tolerances as tol
from .errors import BasisNotOrthonormal, DimensionMismatch
from .hermitian import affinity, as_matrix, sqrt_psd
from .states import QuantumState

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class CoherenceResult:
    value: float
    closest_incoherent: np.ndarray
    basis: np.ndarray
    geometric_value: float

    @property
    def discrepancy(self):
        return abs(self.value - self.geometric_value)


def _basis(basis, dim):
    if basis is None:
        return np.eye(dim, dtype=complex)
    b = np.asarray(getattr(basis, "eigenvectors", basis), dtype=complex)
    if b.shape != (dim, dim):
        raise DimensionMismatch(f"basis has shape {b.shape}, state has dim {dim}")
    err = np.abs(b.conj().T @ b - np.eye(dim)).max()
    if err > tol.ORTHONORMAL_ATOL:
        raise BasisNotOrthonormal(f"basis columns deviate from orthonormality by {err:.3g}")
    return b


def sqrt_state(rho):
    if getattr(rho, "pure", False):
        return as_matrix(rho)
    return sqrt_psd(rho)


def c_a(rho, basis=None) -> CoherenceResult:
    """Affinity-based coherence ``1 - max_delta A(rho, delta)^2``.

    ``basis`` holds the reference basis as matrix columns (an ``Observable`` is
    accepted and its eigenbasis used); default is the computational basis.
    The value is the squared off-diagonal Hilbert-Schmidt weight of
    ``sqrt(rho)``; the geometric value re-evaluates the affinity against the
    maximising incoherent state as an independent check.
    """
    m = as_matrix(rho)
    b = _basis(basis, m.shape[0])
    s = b.conj().T @ sqrt_state(rho) @ b
    diag = np.abs(np.diag(s).real) ** 2
    total = float(np.vdot(s, s).real)
    value = total - float(diag.sum())
    norm = diag.sum()
    assert norm > 0, "a unit-trace state always has sum_i (sqrt rho)_ii^2 > 0"
    p = diag / norm
    delta = QuantumState((b * p) @ b.conj().T)
    geometric = 1.0 - affinity(rho, delta) ** 2
    if abs(geometric - value) > tol.DUAL_ROUTE_ATOL:
        log.warning("C_a routes disagree: interference %.15g vs geometric %.15g", value, geometric)
    return CoherenceResult(value, p, b, geometric)


def c_l1(rho, basis=None) -> float:
    m = as_matrix(rho)
    b = _basis(basis, m.shape[0])
    r = np.abs(b.conj().T @ m @ b)
    return float(r.sum() - np.trace(r))
