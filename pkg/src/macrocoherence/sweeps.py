"""Parameter sweeps behind the command-line tool.

Every sweep returns ``(columns, rows)``; rows are ordered by grid index no
matter how many worker processes computed them.
"""
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
import re

import numpy as np

from . import asymmetry, coherence, dynamics, macroscopicity as macro, states
from .errors import MacroCoherenceError

MEASURES = ("m_tr", "m_hs", "m_sigma", "a_a", "skew", "c_a", "c_l1")

# how each measure column is reproduced with a single library call
RECIPES = {
    "m_tr": "macroscopicity.m_tr(state, L, weight)",
    "m_hs": "macroscopicity.m_hs(state, L, weight)",
    "m_sigma": "macroscopicity.m_sigma(state, L, sigma)",
    "a_a": "asymmetry.total_asymmetry(state, L)",
    "skew": "macroscopicity.skew_information(state, L)",
    "c_a": "coherence.c_a(state, L).value",
    "c_l1": "coherence.c_l1(state, L)",
}

_ANGLE = re.compile(r"^\s*([-+]?\d*\.?\d*(?:e[-+]?\d+)?)\s*\*?\s*(pi)?\s*(?:/\s*(\d+(?:\.\d*)?))?\s*$", re.I)


def parse_angle(text):
    """Parse ``0.3``, ``pi``, ``pi/2``, ``3pi/4`` or ``0.25*pi``."""
    if isinstance(text, (int, float)):
        return float(text)
    m = _ANGLE.match(str(text))
    if not m or not (m.group(1) or m.group(2)):
        raise ValueError(f"cannot parse angle {text!r}")
    coef = m.group(1)
    val = float(coef) if coef not in ("", "+", "-") else (-1.0 if coef == "-" else 1.0)
    if m.group(2):
        val *= np.pi
    if m.group(3):
        val /= float(m.group(3))
    return val


@dataclass(frozen=True)
class StateSpec:
    family: str                 # coherent | ghz | product | dicke
    theta: float = 0.0
    phi: float = 0.0
    site_angles: tuple = ()
    label: str = ""

    @classmethod
    def parse(cls, text):
        """``family[:theta[:phi]]``, e.g. ``ghz:pi/2``; product states take ``product:t1,p1;t2,p2``."""
        fam, _, rest = text.partition(":")
        fam = fam.strip().lower()
        if fam == "product":
            pairs = [p.split(",") for p in rest.split(";") if p.strip()]
            angles = tuple((parse_angle(p[0]), parse_angle(p[1]) if len(p) > 1 else 0.0) for p in pairs)
            return cls("product", site_angles=angles, label=text)
        if fam not in ("coherent", "ghz"):
            raise ValueError(f"unknown state family {fam!r}")
        parts = [p for p in rest.split(":") if p.strip()]
        theta = parse_angle(parts[0]) if parts else np.pi / 2
        phi = parse_angle(parts[1]) if len(parts) > 1 else 0.0
        return cls(fam, theta, phi, label=text)

    def build(self, n, repr=states.DICKE):
        if self.family == "coherent":
            return states.spin_coherent(n, self.theta, self.phi, repr)
        if self.family == "ghz":
            return states.ghz(n, self.theta, self.phi, repr)
        return states.product_state(self.site_angles)

    @property
    def name(self):
        return self.label or f"{self.family}:{self.theta:.6g}"


def resolve_sigma(rule, n):
    if isinstance(rule, str) and rule.lower() in ("sqrt-nlogn", "sqrt-nlnn"):
        return macro.sqrt_n_log_n(n)
    return float(rule)


def weight_from_name(name, sigma=None):
    name = (name or "power").lower()
    if name == "power":
        return macro.power(2)
    if name == "scaled":
        return macro.scaled(sigma)
    if name == "gaussian-g":
        return macro.from_g(macro.gaussian_g(sigma))
    raise ValueError(f"unknown weight {name!r}")


def evaluate(state, L, measures, sigma=None, weight="power"):
    """Values of the requested measures for one (state, observable) pair."""
    need_tr = "m_tr" in measures
    prof = asymmetry.mode_profile(state, L, trace_norms=need_tr)
    out = {}
    for m in measures:
        if m in ("m_tr", "m_hs"):
            f = weight_from_name(weight, sigma)
            kind = macro.TRACE_NORM if m == "m_tr" else macro.HILBERT_SCHMIDT
            out[m] = macro.weighted_measure(state, L, f, kind, prof).value
        elif m == "m_sigma":
            out[m] = macro.m_sigma(state, L, sigma, prof)
        elif m == "a_a":
            out[m] = prof.total("hs")
        elif m == "skew":
            out[m] = macro.skew_information(state, L)
        elif m == "c_a":
            out[m] = coherence.c_a(state, L).value
        elif m == "c_l1":
            out[m] = coherence.c_l1(state, L)
        else:
            raise ValueError(f"unknown measure {m!r}")
    return out


def _map(fn, items, workers):
    if workers and workers > 1 and len(items) > 1:
        with ProcessPoolExecutor(max_workers=workers) as ex:
            return list(ex.map(fn, items))
    return [fn(i) for i in items]


# -- sweeps ---------------------------------------------------------------------------

def _n_point(args):
    n, specs, measures, sigma_rule, weight, repr, axis = args
    sigma = resolve_sigma(sigma_rule, n)
    L = states.collective_spin(n, axis, repr)
    row = [n, sigma]
    for spec in specs:
        vals = evaluate(spec.build(n, repr), L, measures, sigma, weight)
        row.extend(vals[m] for m in measures)
    return row


def sweep_n(specs, n_grid, measures, sigma_rule="sqrt-NlogN", weight="power", repr=states.DICKE,
            axis=(0.0, 0.0), workers=1):
    cols = ["n", "sigma"] + [f"{s.name}:{m}" for s in specs for m in measures]
    rows = _map(_n_point, [(int(n), specs, measures, sigma_rule, weight, repr, axis) for n in n_grid], workers)
    return cols, rows


def _axis_point(args):
    n, vt, vp, specs, measures, sigma, weight, repr = args
    L = states.collective_spin(n, (vt, vp), repr)
    row = [vt, vp]
    for spec in specs:
        vals = evaluate(spec.build(n, repr), L, measures, sigma, weight)
        row.extend(vals[m] for m in measures)
    return row


def sweep_axis(specs, n, axis_thetas, measures, sigma_rule="sqrt-NlogN", weight="power",
               axis_phi=0.0, repr=states.DICKE, workers=1):
    sigma = resolve_sigma(sigma_rule, n)
    cols = ["axis_theta", "axis_phi"] + [f"{s.name}:{m}" for s in specs for m in measures]
    items = [(n, float(t), float(axis_phi), specs, measures, sigma, weight, repr) for t in axis_thetas]
    return cols, _map(_axis_point, items, workers)


def _evolve_curve(args):
    n, theta, channel, taus, sigma, repr = args
    a = states.collective_spin(n, (0, 0), repr).matrix if channel == "dephasing" else states.lowering_operator(n, repr)
    L = states.collective_spin(n, (0, 0), repr)
    tmax = float(taus[-1]) if len(taus) else 0.0
    step = float(np.min(np.diff(taus))) if len(taus) > 1 else tmax
    dt = dynamics.default_dt(a, step) if step > 0 else dynamics.default_dt(a)
    traj = dynamics.evolve_to(states.ghz(n, theta, 0.0, repr), a, taus, dt)
    return [macro.m_sigma(s, L, sigma) for s in traj]


def evolve_curves(n, thetas, channel, taus, sigma_rule="sqrt-NlogN", repr=states.DICKE, workers=1):
    if channel not in ("dephasing", "dissipation"):
        raise ValueError(f"unknown channel {channel!r}")
    sigma = resolve_sigma(sigma_rule, n)
    taus = np.asarray(taus, dtype=float)
    curves = _map(_evolve_curve, [(n, t, channel, taus, sigma, repr) for t in thetas], workers)
    cols = ["tau"] + [f"ghz:{t:.6g}:m_sigma" for t in thetas]
    rows = [[tau] + [c[i] for c in curves] for i, tau in enumerate(taus)]
    return cols, rows


def default_taus(n, channel, points=200):
    tmax = 6.0 / n ** 2 if channel == "dephasing" else 3.0 / n
    return np.linspace(0.0, tmax, points)


def mode_table(state, L, sigma=None):
    prof = asymmetry.mode_profile(state, L)
    cols = ["omega", "a_tr", "a_hs"]
    if sigma is not None:
        cols.append("scaled_weight")
        f = macro.scaled(sigma)
    rows = []
    for w, t, h in zip(prof.omegas, prof.a_tr, prof.a_hs):
        row = [w, t, h]
        if sigma is not None:
            row.append(float(f(w)))
        rows.append(row)
    return cols, rows
