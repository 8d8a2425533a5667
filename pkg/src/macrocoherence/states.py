"""States and collective observables of N spin-1/2 particles.

Two representations are supported: the full tensor space of dimension
``2**N`` and the symmetric (Dicke) subspace of dimension ``N + 1``.

Conventions: ``|0>`` is the ``s_z = +1/2`` state, Dicke index ``k`` counts
particles in ``|1>`` (so ``S_z |k> = (N/2 - k) |k>``), site 1 is the most
significant qubit of a full-tensor index, and ``S_-`` lowers ``m``.
"""
from dataclasses import dataclass, field
from functools import lru_cache
import math

import numpy as np
from scipy.special import gammaln

from . import tolerances as tol
from .errors import AsymmetricInput, DimensionMismatch, NotPSD, TooLarge
from .hermitian import EigenDecomposition, check_hermitian, hermitize, psd_eigh

FULL = "full"
DICKE = "dicke"
GENERIC = "generic"
REPRS = (FULL, DICKE, GENERIC)


@dataclass(frozen=True, eq=False)
class QuantumState:
    """A density matrix together with the representation it lives in.

    ``pure`` is a hint: when set, the matrix is a rank-1 projector and equals
    its own square root.
    """
    matrix: np.ndarray
    repr: str = GENERIC
    n: int | None = None
    pure: bool = False

    def __post_init__(self):
        m = check_hermitian(np.asarray(self.matrix, dtype=complex))
        object.__setattr__(self, "matrix", hermitize(m))
        if self.repr not in REPRS:
            raise ValueError(f"unknown representation {self.repr!r}")
        d = m.shape[0]
        if self.repr == FULL and d != 2 ** self.n:
            raise DimensionMismatch(f"full-tensor state for N={self.n} needs dim {2 ** self.n}, got {d}")
        if self.repr == DICKE and d != self.n + 1:
            raise DimensionMismatch(f"Dicke state for N={self.n} needs dim {self.n + 1}, got {d}")
        tr = np.trace(m).real
        if abs(tr - 1.0) > tol.TRACE_ATOL:
            raise ValueError(f"density matrix has trace {tr!r}, expected 1")

    @property
    def dim(self):
        return self.matrix.shape[0]

    @classmethod
    def from_vector(cls, psi, repr=GENERIC, n=None):
        psi = np.asarray(psi, dtype=complex).ravel()
        psi = psi / np.linalg.norm(psi)
        return cls(np.outer(psi, psi.conj()), repr, n, pure=True)

    @classmethod
    def from_matrix(cls, rho, repr=GENERIC, n=None, check_psd=True):
        rho = np.asarray(rho, dtype=complex)
        if check_psd:
            psd_eigh(rho)
        return cls(rho, repr, n)

    def with_matrix(self, rho, pure=False):
        """Same representation, new density matrix (e.g. a channel output)."""
        return QuantumState(rho, self.repr, self.n, pure)

    def check_psd(self):
        w = np.linalg.eigvalsh(self.matrix)
        if w[0] < tol.NOT_PSD_FLOOR:
            raise NotPSD(f"smallest eigenvalue {w[0]:.3g}")
        return w


def _infer_repr(n, repr):
    if repr not in (FULL, DICKE):
        raise ValueError(f"representation must be {FULL!r} or {DICKE!r}, got {repr!r}")
    if n < 1:
        raise ValueError(f"need at least one particle, got N={n}")
    if repr == FULL and n > tol.FULL_TENSOR_MAX_N:
        raise TooLarge(f"full-tensor representation is capped at N={tol.FULL_TENSOR_MAX_N}, got N={n}")


# -- binomials ------------------------------------------------------------------------

def log_binom(n, k):
    k = np.asarray(k)
    return gammaln(n + 1) - gammaln(k + 1) - gammaln(n - k + 1)


def binom(n, k):
    """Binomial coefficients; exact integers up to N=30, log-gamma beyond."""
    k = np.asarray(k)
    if n <= 30:
        return np.array([math.comb(n, int(i)) for i in k.ravel()], dtype=float).reshape(k.shape)
    return np.exp(log_binom(n, k))


# -- Observables ----------------------------------------------------------------------

class Observable:
    """Hermitian generator with its spectrum grouped into degenerate sectors.

    ``sectors`` is a list of index arrays into the (ascending) eigenvalue list;
    ``sector_values`` holds the eigenvalue of each sector.  If ``snap`` is
    given, sector values are rounded to the nearest multiple of it.
    """

    def __init__(self, matrix, snap=None):
        m = hermitize(check_hermitian(np.asarray(matrix, dtype=complex)))
        self.matrix = m
        d = m.shape[0]
        if np.count_nonzero(m - np.diag(np.diag(m))) == 0:
            diag = np.diag(m).real
            order = np.argsort(diag, kind="stable")
            w = diag[order]
            v = np.eye(d, dtype=complex)[:, order]
            self._perm = order
        else:
            w, v = np.linalg.eigh(m)
            self._perm = None
        self.eig = EigenDecomposition(w, v)
        self.tolerance = tol.DEGENERACY_RTOL * (w[-1] - w[0] + 1.0)
        breaks = np.flatnonzero(np.diff(w) > self.tolerance) + 1
        self.sectors = np.split(np.arange(d), breaks)
        vals = np.array([w[s].mean() for s in self.sectors])
        if snap:
            vals = np.round(vals / snap) * snap
        self.sector_values = vals
        self.labels = np.empty(d, dtype=int)
        for i, s in enumerate(self.sectors):
            self.labels[s] = i

    @property
    def dim(self):
        return self.matrix.shape[0]

    @property
    def eigenvalues(self):
        return self.eig.eigenvalues

    @property
    def eigenvectors(self):
        return self.eig.eigenvectors

    @property
    def nondegenerate(self):
        return len(self.sectors) == self.dim

    def projectors(self):
        v = self.eigenvectors
        return [v[:, s] @ v[:, s].conj().T for s in self.sectors]

    def to_eigenbasis(self, a):
        a = np.asarray(a)
        if self._perm is not None:     # diagonal generator: a reordering is enough
            return a[np.ix_(self._perm, self._perm)]
        v = self.eigenvectors
        return v.conj().T @ a @ v

    def from_eigenbasis(self, a):
        a = np.asarray(a)
        if self._perm is not None:
            inv = np.argsort(self._perm)
            return a[np.ix_(inv, inv)]
        v = self.eigenvectors
        return v @ a @ v.conj().T

    def __repr__(self):
        return f"Observable(dim={self.dim}, sectors={len(self.sectors)})"


# -- Dicke-space spin matrices -------------------------------------------------------

def _dicke_sm(n):
    j = n / 2
    m = j - np.arange(n)  # m of the state being lowered, k = 0..N-1
    return np.diag(np.sqrt(j * (j + 1) - m * (m - 1)), -1).astype(complex)


def _dicke_spin(n):
    sm = _dicke_sm(n)
    sp = sm.conj().T
    sz = np.diag(n / 2 - np.arange(n + 1)).astype(complex)
    return (sp + sm) / 2, (sp - sm) / 2j, sz


@lru_cache(maxsize=None)
def _full_spin(n):
    sx = np.array([[0, 1], [1, 0]], dtype=complex) / 2
    sy = np.array([[0, -1j], [1j, 0]], dtype=complex) / 2
    sz = np.array([[1, 0], [0, -1]], dtype=complex) / 2
    return tuple(collective_sum(n, s) for s in (sx, sy, sz))


def collective_sum(n, local):
    """``sum_k 1 x ... x local_k x ... x 1`` over N two-level sites."""
    d = 2 ** n
    out = np.zeros((d, d), dtype=complex)
    for site in range(n):
        out += np.kron(np.kron(np.eye(2 ** site), local), np.eye(2 ** (n - site - 1)))
    return out


def axis_vector(theta, phi):
    return np.array([np.sin(theta) * np.cos(phi), np.sin(theta) * np.sin(phi), np.cos(theta)])


def collective_spin(n, axis=(0.0, 0.0), repr=DICKE):
    """Total spin ``n . S`` along the axis with polar angle ``axis[0]`` and azimuth ``axis[1]``."""
    _infer_repr(n, repr)
    sx, sy, sz = _dicke_spin(n) if repr == DICKE else _full_spin(n)
    nx, ny, nz = axis_vector(*axis)
    # drop exact zeros so the z axis keeps a diagonal matrix
    mat = sum(c * s for c, s in ((nx, sx), (ny, sy), (nz, sz)) if c != 0.0)
    return Observable(mat, snap=0.5)


def lowering_operator(n, repr=DICKE):
    _infer_repr(n, repr)
    if repr == DICKE:
        return _dicke_sm(n)
    return collective_sum(n, np.array([[0, 0], [1, 0]], dtype=complex))


# -- state constructors ---------------------------------------------------------------

def qubit(theta, phi):
    return np.array([np.cos(theta / 2), np.sin(theta / 2) * np.exp(1j * phi)])


def _kron_all(vectors):
    out = np.ones(1, dtype=complex)
    for v in vectors:
        out = np.kron(out, v)
    return out


def coherent_amplitudes(n, theta, phi):
    """Dicke amplitudes ``sqrt(C(N,k)) cos^(N-k)(theta/2) sin^k(theta/2) e^{ik phi}``."""
    k = np.arange(n + 1)
    c, s = np.cos(theta / 2), np.sin(theta / 2)
    sign = np.sign(c) ** (n - k) * np.sign(s) ** k
    with np.errstate(divide="ignore", invalid="ignore"):
        lc = np.where(n - k == 0, 0.0, (n - k) * np.log(abs(c)))
        ls = np.where(k == 0, 0.0, k * np.log(abs(s)))
    logmag = 0.5 * log_binom(n, k) + lc + ls
    amp = np.where(np.isfinite(logmag), np.exp(logmag), 0.0) * sign
    return amp * np.exp(1j * k * phi)


def spin_coherent(n, theta, phi=0.0, repr=DICKE):
    _infer_repr(n, repr)
    if repr == DICKE:
        psi = coherent_amplitudes(n, theta, phi)
    else:
        psi = _kron_all([qubit(theta, phi)] * n)
    return QuantumState.from_vector(psi, repr, n)


def ghz(n, theta=np.pi / 2, phi=0.0, repr=DICKE):
    """``cos(theta/2)|0...0> + sin(theta/2) e^{i phi}|1...1>``."""
    _infer_repr(n, repr)
    d = n + 1 if repr == DICKE else 2 ** n
    psi = np.zeros(d, dtype=complex)
    psi[0] += np.cos(theta / 2)
    psi[-1] += np.sin(theta / 2) * np.exp(1j * phi)
    return QuantumState.from_vector(psi, repr, n)


def product_state(site_angles):
    """Full-tensor product of single-qubit states given as ``(theta_i, phi_i)`` pairs."""
    site_angles = list(site_angles)
    n = len(site_angles)
    _infer_repr(n, FULL)
    return QuantumState.from_vector(_kron_all([qubit(t, p) for t, p in site_angles]), FULL, n)


def dicke_state(n, k):
    psi = np.zeros(n + 1, dtype=complex)
    psi[k] = 1.0
    return QuantumState.from_vector(psi, DICKE, n)


# -- embedding between representations -----------------------------------------------

@lru_cache(maxsize=16)
def dicke_isometry(n):
    """Columns are the normalised symmetric basis vectors ``|k>_D`` in the full space."""
    _infer_repr(n, FULL)
    idx = np.arange(2 ** n)
    ones = np.array([bin(i).count("1") for i in idx])
    w = np.zeros((2 ** n, n + 1))
    w[idx, ones] = 1.0 / np.sqrt(binom(n, ones))
    w.setflags(write=False)
    return w


def _guess_n(dim, direction):
    n = dim - 1 if direction == "dicke_to_full" else int(round(math.log2(dim)))
    if direction == "full_to_dicke" and 2 ** n != dim:
        raise DimensionMismatch(f"dimension {dim} is not a power of two")
    return n


def dicke_embed(obj, direction, max_leakage=1e-9):
    """Convert a state, vector or operator between Dicke and full-tensor form.

    ``direction`` is ``"dicke_to_full"`` or ``"full_to_dicke"``.  Returns
    ``(converted, leakage)``.  For states and vectors the leakage is the
    weight outside the symmetric subspace (states are renormalised after
    projection); for operators it is ``||O P - P O P||_F``, which vanishes iff
    the operator maps the symmetric subspace into itself.
    """
    if direction not in ("dicke_to_full", "full_to_dicke"):
        raise ValueError(f"unknown direction {direction!r}")
    is_state = isinstance(obj, QuantumState)
    a = obj.matrix if is_state else np.asarray(obj, dtype=complex)
    n = obj.n if is_state and obj.n is not None else _guess_n(a.shape[0], direction)
    w = dicke_isometry(n)
    to_full = direction == "dicke_to_full"
    if is_state:
        if to_full:
            return QuantumState(w @ a @ w.T, FULL, n, obj.pure), 0.0
        p = w.T @ a @ w
        kept = np.trace(p).real
        leak = max(0.0, 1.0 - kept)
        if leak > max_leakage:
            raise AsymmetricInput(f"state has weight {leak:.3g} outside the symmetric subspace")
        return QuantumState(p / kept, DICKE, n, obj.pure), leak
    if a.ndim == 1:
        if to_full:
            return w @ a, 0.0
        c = w.T @ a
        kept = np.vdot(c, c).real / np.vdot(a, a).real
        leak = max(0.0, 1.0 - kept)
        if leak > max_leakage:
            raise AsymmetricInput(f"vector has weight {leak:.3g} outside the symmetric subspace")
        return c, leak
    if to_full:
        return w @ a @ w.T, 0.0
    proj = w @ w.T
    leak = float(np.linalg.norm(a @ proj - proj @ a @ proj))
    if leak > max_leakage:
        raise AsymmetricInput(f"operator leaks {leak:.3g} out of the symmetric subspace")
    return w.T @ a @ w, leak
