"""End-to-end verification suite behind ``macrocoherence verify``.

Each check returns a ``Check`` with a one-line detail string.  Checks are
deterministic: every random draw comes from a seeded generator.
"""
from dataclasses import dataclass
import tempfile
import time
from pathlib import Path

import numpy as np

from . import asymmetry, coherence, dynamics, hermitian, macroscopicity as macro, oracles, states, sweeps
from .states import DICKE, FULL, Observable, QuantumState

SLACK = 1e-9


@dataclass
class Check:
    number: int
    name: str
    passed: bool
    detail: str
    seconds: float = 0.0


def random_state(dim, rng, rank=None):
    return QuantumState(asymmetry.random_density_matrix(dim, rng, rank))


def random_observable(dim, rng, integer=True):
    """Random Hermitian generator; integer spectra (with repeats) make many shared mode spacings."""
    if integer:
        lam = rng.integers(-2, 3, size=dim).astype(float)
    else:
        lam = rng.normal(size=dim)
    v, _ = np.linalg.qr(rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim)))
    return Observable((v * lam) @ v.conj().T)


def _rel(a, b):
    return abs(a - b) / max(abs(b), 1e-300)


# -- criteria -----------------------------------------------------------------------------

def mode_increase_fixture(seed=0):
    L = Observable(np.diag([0.0, 1.0, 2.0]))
    rho = QuantumState(np.full((3, 3), 1 / 3, dtype=complex), pure=True)
    before = asymmetry.mode_profile(rho, L)
    channel = dynamics.partial_dephasing(L, [1.0, -1.0])
    after = asymmetry.mode_profile(channel.kraus()(rho), L)
    want_before = np.array([1, 2, 3, 2, 1]) / 9
    want_after = np.array([1 / 6, 0, 2 / 3, 0, 1 / 6])
    err = max(np.max(np.abs(before.a_hs - want_before)), np.max(np.abs(after.a_hs - want_after)),
              abs(before.total() - 2 / 3), abs(after.total() - 1 / 3))
    ok = err < 1e-12 and after.a_hs[4] > before.a_hs[4]
    return ok, f"max error {err:.1e}; A_HS(2) {before.a_hs[4]:.6f} -> {after.a_hs[4]:.6f}; totals {before.total():.6f} -> {after.total():.6f}"


def dual_formula(seed=0):
    rng = np.random.default_rng(seed)
    worst = 0.0
    for i in range(500):
        d = int(rng.integers(2, 9))
        rank = int(rng.integers(1, d + 1))
        r = coherence.c_a(random_state(d, rng, rank))
        worst = max(worst, r.discrepancy)
    return worst < 1e-10, f"500 states, max |C_a(closest) - C_a(sum)| = {worst:.1e}"


def monotonicity(seed=0):
    rng = np.random.default_rng(seed)
    worst_c = worst_sel = -np.inf
    for i in range(200):
        d = int(rng.integers(2, 7))
        rho = random_state(d, rng)
        ch = dynamics.random_incoherent_channel(d, int(rng.integers(1, 5)), seed=rng)
        c0 = coherence.c_a(rho).value
        worst_c = max(worst_c, coherence.c_a(ch(rho)).value - c0)
        avg = sum(p * coherence.c_a(s).value for p, s in ch.branches(rho))
        worst_sel = max(worst_sel, avg - c0)
    weight = macro.from_g(macro.gaussian_g(1.0))
    worst_cov = {k: -np.inf for k in ("A_a", "A_tr(w)", "M_HS", "M_tr", "M_sigma")}
    for i in range(100):
        d = int(rng.integers(2, 6))
        L = random_observable(d, rng)
        rho = random_state(d, rng)
        out = dynamics.random_covariant_channel(L, seed=rng)(rho)
        p0, p1 = asymmetry.mode_profile(rho, L), asymmetry.mode_profile(out, L)
        sigma = float(rng.choice([0.5, 1.0, 3.0]))
        diffs = {
            "A_a": p1.total("hs") - p0.total("hs"),
            "A_tr(w)": float(np.max(p1.a_tr - p0.a_tr)),
            "M_HS": macro.m_hs(out, L, weight, p1) - macro.m_hs(rho, L, weight, p0),
            "M_tr": macro.m_tr(out, L, None, p1) - macro.m_tr(rho, L, None, p0),
            "M_sigma": macro.m_sigma(out, L, sigma, p1) - macro.m_sigma(rho, L, sigma, p0),
        }
        for k, v in diffs.items():
            worst_cov[k] = max(worst_cov[k], v)
    ok = worst_c <= SLACK and worst_sel <= SLACK and all(v <= SLACK for v in worst_cov.values())
    parts = [f"C_a {worst_c:.1e}", f"C_a selective {worst_sel:.1e}"] + [f"{k} {v:.1e}" for k, v in worst_cov.items()]
    return ok, "max increase: " + ", ".join(parts)


def skew_identity(seed=0):
    rng = np.random.default_rng(seed)
    worst = 0.0
    for i in range(100):
        d = int(rng.integers(2, 8))
        L = random_observable(d, rng, integer=bool(i % 2))
        rho = random_state(d, rng)
        worst = max(worst, abs(macro.skew_information_modes(rho, L) - macro.skew_information(rho, L)))
    worst_rel = 0.0
    theta = 1.1
    for n in (2, 10, 100, 500):
        L = states.collective_spin(n)
        v = macro.skew_information_modes(states.spin_coherent(n, theta, 0.4), L)
        worst_rel = max(worst_rel, _rel(v, n * np.sin(theta) ** 2 / 4))
    return worst < 1e-9 and worst_rel < 1e-9, f"max abs gap {worst:.1e} on 100 pairs; coherent rel err {worst_rel:.1e}"


def closed_forms(seed=0):
    rng = np.random.default_rng(seed)
    worst, where = 0.0, ""
    for n, rep in ((3, FULL), (8, FULL), (50, DICKE), (500, DICKE)):
        sigma = macro.sqrt_n_log_n(n)
        L = states.collective_spin(n, repr=rep)
        for theta in (np.pi / 2, np.pi / 4, 1.0):
            ghz = states.ghz(n, theta, 0.3, rep)
            prof = asymmetry.mode_profile(ghz, L)
            got = {"m_hs": macro.m_hs(ghz, L, None, prof), "m_tr": macro.m_tr(ghz, L, None, prof),
                   "m_sigma": macro.m_sigma(ghz, L, sigma, prof)}
            for m, v in got.items():
                e = _rel(v, oracles.closed_form_measures("ghz", m, n=n, theta=theta, sigma=sigma).value)
                if e > worst:
                    worst, where = e, f"ghz {m} N={n}"
        for vt in (0.3, np.pi / 2, 2.0):
            Lt = states.collective_spin(n, (vt, 0.7), rep)
            v = macro.m_hs(states.ghz(n, np.pi / 3, 0.0, rep), Lt)
            e = _rel(v, oracles.closed_form_measures("ghz", "m_hs", n=n, theta=np.pi / 3, axis_theta=vt).value)
            if e > worst:
                worst, where = e, f"ghz axis N={n}"
        if rep == FULL:
            angles = [(float(t), float(f)) for t, f in zip(rng.uniform(0, np.pi, n), rng.uniform(0, 2 * np.pi, n))]
            v = macro.m_hs(states.product_state(angles), L)
            want = oracles.closed_form_measures("product", "m_hs", site_angles=angles).value
        else:
            angles = [(0.9, 0.2)] * n
            v = macro.m_hs(states.spin_coherent(n, 0.9, 0.2, rep), L)
            want = oracles.closed_form_measures("product", "m_hs", site_angles=angles).value
        e = _rel(v, want)
        if e > worst:
            worst, where = e, f"product N={n}"
    return worst < 1e-8, f"max rel err {worst:.1e}" + (f" ({where})" if where else "")


def _slope(ns, ys):
    return float(np.polyfit(np.log(ns), np.log(ys), 1)[0])


def scaling(seed=0):
    ns = np.arange(50, 501, 25)
    specs = [sweeps.StateSpec.parse(s) for s in ("coherent:pi/2", "coherent:pi/4", "ghz:pi/2", "ghz:pi/4")]
    cols, rows = sweeps.sweep_n(specs, ns, ["m_tr", "m_hs", "m_sigma"])
    data = np.array(rows)
    col = {c: data[:, i] for i, c in enumerate(cols)}
    s = {k: _slope(ns, col[k]) for k in cols if k.endswith(("m_tr", "m_hs"))}
    checks = []
    for k, v in s.items():
        want, tol_ = (2.0, 0.05) if k.startswith("ghz") else ((1.5, 0.05) if k.endswith("m_tr") else (1.0, 0.02))
        checks.append(abs(v - want) <= tol_)
    decreasing = all(np.all(np.diff(col[f"coherent:pi/{q}:m_sigma"]) < 0) for q in (2, 4))
    small = all(col[f"coherent:pi/{q}:m_sigma"][-1] < 0.02 for q in (2, 4))
    ghz_lim = max(abs(col["ghz:pi/2:m_sigma"][-1] - 0.5), abs(col["ghz:pi/4:m_sigma"][-1] - 0.25))
    ok = all(checks) and decreasing and small and ghz_lim < 1e-3
    slopes = ", ".join(f"{k} {v:.3f}" for k, v in s.items())
    return ok, f"slopes {slopes}; coherent M_sigma decreasing {decreasing}; GHZ limit gap {ghz_lim:.1e}"


def sandwich(seed=0):
    rng = np.random.default_rng(seed)
    worst = -np.inf
    for i in range(100):
        d = int(rng.integers(2, 7))
        L = random_observable(d, rng, integer=bool(i % 2))
        rho = random_state(d, rng)
        for sigma in (0.5, 1.0, 3.0):
            r = macro.sandwich_bounds(rho, L, sigma)
            worst = max(worst, r.lower - r.value, r.value - r.upper)
    n = 6
    L = states.collective_spin(n, repr=FULL)
    worst_prod = -np.inf
    for i in range(50):
        angles = list(zip(rng.uniform(0, np.pi, n), rng.uniform(0, 2 * np.pi, n)))
        sigma = float(rng.uniform(0.3, 3.0))
        v = macro.m_sigma(states.product_state(angles), L, sigma)
        worst_prod = max(worst_prod, v - macro.separability_ceiling(n, 1.0, sigma))
    ok = worst <= SLACK and worst_prod <= SLACK
    return ok, f"worst bound violation {worst:.1e}; product ceiling violation {worst_prod:.1e}"


def weight_construction(seed=0):
    worst_line = worst_half = 0.0
    for sigma in (0.5, 2.0):
        full = macro.from_g(macro.gaussian_g(sigma))
        half = macro.from_g(macro.gaussian_g(sigma), domain=(0.0, np.inf))
        for w in (0.1, 1.0, 10.0):
            want = -np.expm1(-w ** 2 / (8 * sigma ** 2))
            worst_line = max(worst_line, abs(float(full.full_equivalent(w)) - want))
            worst_half = max(worst_half, abs(float(half(w)) - want))
    ok = worst_line < 1e-6 and worst_half < 1e-6
    return ok, f"max err: real line (per +-w pair) {worst_line:.1e}, half line {worst_half:.1e}"


def hellinger_identities(seed=0):
    rng = np.random.default_rng(seed)
    d = 5
    L = random_observable(d, rng)
    rho = random_state(d, rng)
    prof = asymmetry.mode_profile(rho, L, trace_norms=False)
    worst = 0.0
    for x in rng.uniform(-4, 4, 20):
        direct = hermitian.hellinger(rho, asymmetry.translate(rho, L, x))
        modes = float(np.sum(prof.a_hs * (1 - np.cos(prof.omegas * x))))
        worst = max(worst, abs(direct - modes))
    t, wts = np.polynomial.hermite.hermgauss(60)
    worst_avg = 0.0
    for i in range(20):
        d = int(rng.integers(2, 7))
        L = random_observable(d, rng, integer=bool(i % 2))
        rho = random_state(d, rng)
        sigma = float(rng.uniform(0.5, 3.0))
        xs = np.sqrt(2.0) * t / (2 * sigma)   # x ~ N(0, 1/(4 sigma^2))
        avg = sum(wk * hermitian.hellinger(rho, asymmetry.translate(rho, L, xk)) for xk, wk in zip(xs, wts))
        worst_avg = max(worst_avg, abs(avg / np.sqrt(np.pi) - macro.m_sigma(rho, L, sigma)))
    return worst < 1e-10 and worst_avg < 1e-7, f"mode expansion err {worst:.1e}; Gauss-Hermite err {worst_avg:.1e}"


def dynamics_checks(seed=0):
    n = 50
    a = states.collective_spin(n).matrix
    dt = dynamics.default_dt(a, 1e-4)
    every = int(round(1e-4 / dt))
    spec = dynamics.LindbladSpec(a, dt, 10 * every, record_every=every)
    traj = dynamics.lindblad_evolve(states.ghz(n, np.pi / 2), spec)
    worst = max(_rel(abs(s.matrix[0, -1]), 0.5 * np.exp(-n ** 2 * t / 2))
                for t, s in zip(traj.times[1:], traj.states[1:]))
    drift = traj.max_trace_drift

    m = 4
    times = np.linspace(0, 0.5, 6)
    dk = dynamics.evolve_to(states.ghz(m, 1.0, 0.2), states.lowering_operator(m), times, 1e-3)
    fl = dynamics.evolve_to(states.ghz(m, 1.0, 0.2, FULL), states.lowering_operator(m, FULL), times, 1e-3)
    iso = states.dicke_isometry(m)
    gap = max(np.max(np.abs(iso @ x.matrix @ iso.conj().T - y.matrix)) for x, y in zip(dk, fl))

    qual = True
    thetas = (np.pi / 2, np.pi / 4, np.pi / 8)
    for channel in ("dephasing", "dissipation"):
        nn = 20
        taus = sweeps.default_taus(nn, channel, 40)
        _, rows = sweeps.evolve_curves(nn, thetas, channel, taus)
        curves = np.array(rows)[:, 1:]
        qual &= bool(np.all(np.diff(curves, axis=0) <= SLACK))
        ratio = curves[0] / np.sin(thetas) ** 2
        qual &= bool(np.allclose(ratio, ratio[0], rtol=1e-9)) and bool(np.all(np.diff(curves[0]) < 0))
    ok = worst < 1e-6 and drift < 1e-9 and gap < 1e-7 and qual
    return ok, f"decay rel err {worst:.1e}; trace drift {drift:.1e}; Dicke/full gap {gap:.1e}; decay curves monotone and ordered {qual}"


def representation_equivalence(seed=0):
    worst, where = 0.0, ""
    ms = ["m_tr", "m_hs", "m_sigma", "a_a", "skew"]
    for n in range(2, 11):
        sigma = macro.sqrt_n_log_n(n)
        Ld, Lf = states.collective_spin(n), states.collective_spin(n, repr=FULL)
        for fam, th in (("ghz", np.pi / 3), ("coherent", 0.8)):
            spec = sweeps.StateSpec(fam, th, 0.5)
            a = sweeps.evaluate(spec.build(n, DICKE), Ld, ms, sigma)
            b = sweeps.evaluate(spec.build(n, FULL), Lf, ms, sigma)
            for m in ms:
                e = abs(a[m] - b[m]) / max(1.0, abs(a[m]))
                if e > worst:
                    worst, where = e, f"{fam} {m} N={n}"
    return worst < 1e-9, f"max gap {worst:.1e}" + (f" ({where})" if where else "")


def cli_determinism(seed=0):
    from .cli import main
    with tempfile.TemporaryDirectory() as tmp:
        outs = []
        for i in range(2):
            p = Path(tmp) / f"run{i}.csv"
            code = main(["sweep-n", "--n-grid", "2:40", "--seed", str(seed), "--out", str(p)])
            if code != 0:
                return False, f"sweep-n exited with {code}"
            outs.append(p.read_bytes())
    same = outs[0] == outs[1]
    return same, f"two sweep-n runs byte-identical: {same} ({len(outs[0])} bytes)"


CRITERIA = [
    (1, "mode increase fixture", mode_increase_fixture),
    (2, "dual coherence formulas", dual_formula),
    (3, "monotonicity suites", monotonicity),
    (4, "skew information identity", skew_identity),
    (5, "closed forms", closed_forms),
    (6, "scaling with N", scaling),
    (7, "sandwich and product bounds", sandwich),
    (8, "weight from g", weight_construction),
    (9, "Hellinger identities", hellinger_identities),
    (10, "dynamics", dynamics_checks),
    (11, "representation equivalence", representation_equivalence),
    (12, "CLI determinism", cli_determinism),
]

# wall-clock budgets (seconds) stated alongside some criteria
TIME_LIMITS = {1: 1.0, 2: 10.0, 3: 60.0, 5: 60.0}


def run_one(number, seed=0):
    num, name, fn = CRITERIA[number - 1]
    t0 = time.perf_counter()
    try:
        ok, detail = fn(seed)
    except Exception as e:      # a crash is a failure, reported like any other
        ok, detail = False, f"{type(e).__name__}: {e}"
    took = time.perf_counter() - t0
    limit = TIME_LIMITS.get(num)
    if limit is not None and took > limit:
        ok, detail = False, f"{detail}; took {took:.1f}s, budget {limit:.0f}s"
    return Check(num, name, bool(ok), detail, took)


def run_all(seed=0):
    return [run_one(num, seed) for num, _, _ in CRITERIA]
