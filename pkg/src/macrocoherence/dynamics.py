"""Decoherence dynamics and quantum channels.

Lindblad evolution ``d rho/d tau = A rho A^+ - (A^+ A rho + rho A^+ A)/2`` is
integrated with fixed-step classical RK4.  Channels are held as Kraus sets;
covariant maps that act by damping mode components are Schur multipliers on
the sectors of the observable and get Kraus operators when completely
positive.
"""
from dataclasses import dataclass, field
import logging

import numpy as np
from scipy.stats import unitary_group

from . import tolerances as tol
from .asymmetry import apply_kraus, check_trace_preserving, mode_spectrum
from .errors import ModesNotSymmetric, NotCompletelyPositive, StepTooLarge, UnknownMode
from .hermitian import as_matrix, hermitize
from .states import DICKE, FULL, Observable, QuantumState, _infer_repr

log = logging.getLogger(__name__)

INCOHERENT = "incoherent"
COVARIANT = "covariant"
GENERIC = "generic"


@dataclass(frozen=True, eq=False)
class KrausChannel:
    operators: list
    kind: str = GENERIC

    def __post_init__(self):
        ops = [np.asarray(k, dtype=complex) for k in self.operators]
        check_trace_preserving(ops)
        object.__setattr__(self, "operators", ops)

    @property
    def dim(self):
        return self.operators[0].shape[1]

    def __call__(self, rho):
        out = hermitize(apply_kraus(self.operators, rho))
        if isinstance(rho, QuantumState):
            return rho.with_matrix(out / np.trace(out).real)
        return out

    def branches(self, rho):
        """Selective outcomes ``(p_n, K_n rho K_n^+ / p_n)`` with ``p_n > 0``."""
        m = as_matrix(rho)
        out = []
        for k in self.operators:
            x = hermitize(k @ m @ k.conj().T)
            p = np.trace(x).real
            if p > 1e-14:
                out.append((p, QuantumState(x / p)))
        return out


def compose(second: KrausChannel, first: KrausChannel, kind=None):
    ops = [a @ b for a in second.operators for b in first.operators]
    return KrausChannel(_prune(ops), kind or (first.kind if first.kind == second.kind else GENERIC))


def mixture(channels, probs, kind=None):
    ops = [np.sqrt(p) * k for c, p in zip(channels, probs) for k in c.operators]
    kinds = {c.kind for c in channels}
    return KrausChannel(_prune(ops), kind or (kinds.pop() if len(kinds) == 1 else GENERIC))


def _prune(ops, atol=1e-15):
    kept = [k for k in ops if np.abs(k).max() > atol]
    return kept or ops[:1]


# -- Lindblad evolution ---------------------------------------------------------------

@dataclass(frozen=True)
class LindbladSpec:
    jump_operator: np.ndarray
    dt: float
    steps: int
    record_every: int = 1

    def __post_init__(self):
        if not self.dt > 0:
            raise ValueError(f"dt must be positive, got {self.dt!r}")
        if self.steps < 0 or self.record_every < 1:
            raise ValueError("steps must be >= 0 and record_every >= 1")


@dataclass
class Trajectory:
    times: np.ndarray
    states: list
    max_trace_drift: float = 0.0


def lindblad_rhs(rho, a, ada):
    return a @ rho @ a.conj().T - 0.5 * (ada @ rho + rho @ ada)


def default_dt(a, tmax=None):
    """``min(1e-3, 0.01 / ||A||_op^2)``, shrunk so that ``tmax`` is a whole number of steps."""
    a = np.asarray(a)
    norm2 = np.linalg.norm(a, 2) ** 2
    dt = min(1e-3, 0.01 / norm2) if norm2 > 0 else 1e-3
    if tmax:
        dt = tmax / np.ceil(tmax / dt)
    return dt


def lindblad_evolve(rho0, spec: LindbladSpec) -> Trajectory:
    a = np.asarray(spec.jump_operator, dtype=complex)
    rho = as_matrix(rho0).astype(complex)
    if a.shape != rho.shape:
        raise ValueError(f"jump operator shape {a.shape} does not match state {rho.shape}")
    ada = a.conj().T @ a
    dt = spec.dt
    # RK4 is stable on the negative real axis up to |h lambda| ~ 2.78
    if dt * 2.0 * np.linalg.norm(ada, 2) > 2.5:
        raise StepTooLarge(f"dt={dt:g} is outside the RK4 stability region for this generator")
    wrap = rho0.with_matrix if isinstance(rho0, QuantumState) else (lambda m: QuantumState(m))
    times, states = [0.0], [wrap(rho)]
    worst = 0.0
    for step in range(1, spec.steps + 1):
        k1 = lindblad_rhs(rho, a, ada)
        k2 = lindblad_rhs(rho + 0.5 * dt * k1, a, ada)
        k3 = lindblad_rhs(rho + 0.5 * dt * k2, a, ada)
        k4 = lindblad_rhs(rho + dt * k3, a, ada)
        new = hermitize(rho + dt / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4))
        tr = np.trace(new).real
        drift = abs(tr - 1.0)
        if drift > tol.TRACE_DRIFT_MAX:
            raise StepTooLarge(f"trace drifted by {drift:.3g} at step {step}")
        worst = max(worst, drift)
        rho = new / tr
        if step % spec.record_every == 0 or step == spec.steps:
            times.append(step * dt)
            states.append(wrap(rho))
    if worst > 0:
        log.debug("max trace drift per step %.3g (renormalised)", worst)
    return Trajectory(np.array(times), states, worst)


def evolve_to(rho0, a, times, dt=None):
    """States at the requested times (which must be multiples of ``dt``)."""
    times = np.asarray(times, dtype=float)
    dt = dt or default_dt(a)
    steps = np.rint(times / dt).astype(int)
    if np.any(np.abs(steps * dt - times) > 1e-9 * np.maximum(times, dt)):
        raise ValueError("requested times are not on the dt grid")
    out = []
    rho, done = rho0, 0
    for s in steps:
        if s > done:
            rho = lindblad_evolve(rho, LindbladSpec(a, dt, int(s - done), int(s - done))).states[-1]
            done = s
        out.append(rho)
    return out


def dephased_ghz(n, theta, phi=0.0, tau=0.0, repr=DICKE) -> QuantumState:
    """GHZ state after dephasing with ``A = S_z`` for time ``tau``: coherence damped by ``exp(-N^2 tau / 2)``."""
    if tau < 0:
        raise ValueError("tau must be nonnegative")
    _infer_repr(n, repr)
    d = n + 1 if repr == DICKE else 2 ** n
    rho = np.zeros((d, d), dtype=complex)
    rho[0, 0] = np.cos(theta / 2) ** 2
    rho[-1, -1] = np.sin(theta / 2) ** 2
    c = np.sin(theta) / 2 * np.exp(-n ** 2 * tau / 2)
    rho[0, -1] += c * np.exp(-1j * phi)
    rho[-1, 0] += c * np.exp(1j * phi)
    return QuantumState(rho, repr, n, pure=tau == 0)


# -- covariant Schur multipliers ------------------------------------------------------

class ModeDamping:
    """Covariant map multiplying the ``(m, n)`` sector block by ``D[m, n]``.

    ``D`` must be Hermitian with unit diagonal (trace preservation); the map
    is completely positive iff ``D`` is positive semidefinite.
    """

    def __init__(self, L: Observable, multiplier):
        d = np.asarray(multiplier, dtype=complex)
        if d.shape != (len(L.sectors),) * 2:
            raise ValueError("multiplier must be indexed by sector pairs")
        self.L = L
        self.multiplier = d
        self.completely_positive = bool(np.linalg.eigvalsh(hermitize(d))[0] > -1e-12)

    def __call__(self, rho):
        lab = self.L.labels
        m = self.L.from_eigenbasis(self.multiplier[lab[:, None], lab[None, :]] * self.L.to_eigenbasis(as_matrix(rho)))
        if isinstance(rho, QuantumState):
            return rho.with_matrix(hermitize(m))
        return m

    def kraus(self) -> KrausChannel:
        if not self.completely_positive:
            raise NotCompletelyPositive("mode damping matrix is not positive semidefinite")
        w, u = np.linalg.eigh(hermitize(self.multiplier))
        v = self.L.eigenvectors
        lab = self.L.labels
        ops = [np.sqrt(wk) * (v * u[lab, k]) @ v.conj().T for k, wk in enumerate(w) if wk > 1e-14]
        return KrausChannel(ops, COVARIANT)


def partial_dephasing(L: Observable, kill_modes) -> ModeDamping:
    """Zero the listed mode components and keep every other one."""
    spec = mode_spectrum(L)
    kill = {spec.index(w) for w in kill_modes}
    mirrored = {len(spec.omegas) - 1 - i for i in kill}
    if kill != mirrored:
        raise ModesNotSymmetric("kill_modes must be closed under negation")
    if spec.zero in kill:
        raise UnknownMode("the zero mode cannot be removed by a trace-preserving map")
    d = np.where(np.isin(spec.pair_index, list(kill)), 0.0, 1.0)
    return ModeDamping(L, d)


def translation(L: Observable, x) -> KrausChannel:
    v = L.eigenvectors
    lam = L.sector_values[L.labels]
    return KrausChannel([(v * np.exp(-1j * x * lam)) @ v.conj().T], COVARIANT)


# -- random channels ------------------------------------------------------------------

def random_incoherent_channel(dim, n_kraus, seed=None) -> KrausChannel:
    """Kraus operators with one nonzero entry per column.

    Each operator sends column ``j`` to row ``pi_n(j)`` for a random
    permutation ``pi_n``; amplitudes are normalised column by column so the
    operators are complete by construction.
    """
    if dim < 2 or n_kraus < 1:
        raise ValueError("need dim >= 2 and n_kraus >= 1")
    rng = np.random.default_rng(seed)
    amp = rng.normal(size=(n_kraus, dim)) + 1j * rng.normal(size=(n_kraus, dim))
    # sparsify so that some operators ignore some columns
    amp *= rng.random((n_kraus, dim)) > 0.3 if n_kraus > 1 else 1
    amp[0, np.all(amp == 0, axis=0)] = 1.0
    amp /= np.linalg.norm(amp, axis=0)
    ops = []
    for n in range(n_kraus):
        k = np.zeros((dim, dim), dtype=complex)
        k[rng.permutation(dim), np.arange(dim)] = amp[n]
        ops.append(k)
    return KrausChannel(ops, INCOHERENT)


def _sector_unitary(L, rng):
    v = L.eigenvectors
    u = np.zeros((L.dim, L.dim), dtype=complex)
    for s in L.sectors:
        u[np.ix_(s, s)] = unitary_group.rvs(len(s), random_state=rng) if len(s) > 1 else np.exp(2j * np.pi * rng.random())
    return KrausChannel([v @ u @ v.conj().T], COVARIANT)


def _random_damping(L, rng):
    lam = L.sector_values
    gaps = lam[:, None] - lam[None, :]
    xs = rng.normal(scale=2.0, size=rng.integers(1, 4))
    q = rng.dirichlet(np.ones(len(xs)))
    d = sum(qk * np.exp(-1j * gaps * xk) for qk, xk in zip(q, xs))
    d = d * np.exp(-gaps ** 2 / (8 * rng.uniform(0.3, 3.0) ** 2))
    return ModeDamping(L, d).kraus()


def _random_mode_kraus(L, rng):
    """Kraus operators that each carry a single mode; generic covariant channel."""
    spec = mode_spectrum(L)
    lab = L.labels
    modes = spec.pair_index[lab[:, None], lab[None, :]]
    picks = [spec.zero] + list(rng.integers(0, len(spec.omegas), size=rng.integers(1, 4)))
    ops = []
    for i in picks:
        g = rng.normal(size=(L.dim, L.dim)) + 1j * rng.normal(size=(L.dim, L.dim))
        ops.append(np.where(modes == i, g, 0))
    s = sum(k.conj().T @ k for k in ops)
    w, u = np.linalg.eigh(s)
    inv_sqrt = (u / np.sqrt(w)) @ u.conj().T
    v = L.eigenvectors
    return KrausChannel([v @ k @ inv_sqrt @ v.conj().T for k in ops], COVARIANT)


def random_covariant_channel(L: Observable, seed=None) -> KrausChannel:
    """Random covariant channel: a convex mixture, optionally composed, of covariant primitives.

    Primitives are translations ``e^{-ixL}``, positive mode-damping maps,
    unitaries acting inside degenerate sectors, and random channels whose
    Kraus operators each shift by a single mode.
    """
    rng = np.random.default_rng(seed)

    def primitive():
        pick = rng.integers(4)
        if pick == 0:
            return translation(L, rng.normal(scale=3.0))
        if pick == 1:
            return _random_damping(L, rng)
        if pick == 2:
            return _sector_unitary(L, rng)
        return _random_mode_kraus(L, rng)

    parts = [primitive() for _ in range(rng.integers(1, 4))]
    ch = mixture(parts, rng.dirichlet(np.ones(len(parts))), COVARIANT)
    if rng.random() < 0.3:
        ch = compose(primitive(), ch, COVARIANT)
    return ch
