"""Command-line front end.

    macrocoherence measure --state ghz:pi/2 --n 50 --measure m_hs,m_sigma
    macrocoherence modes --state coherent:pi/3 --n 20
    macrocoherence sweep-n --n-grid 2:500 --out n_sweep.csv --plot
    macrocoherence sweep-axis --n 500 --axis-points 181 --out axis_sweep.csv
    macrocoherence evolve --channel dephasing --n 50 --out dephasing.csv
    macrocoherence verify

Exit status: 0 on success, 1 on numerical failure, 2 on a configuration error.
"""
import argparse
import csv
from dataclasses import asdict, dataclass, field
import io
import json
import logging
import math
from pathlib import Path
import sys

import numpy as np

from . import __version__, states, sweeps, tolerances
from .errors import MacroCoherenceError, StepTooLarge

log = logging.getLogger("macrocoherence")

COMMANDS = ("measure", "modes", "sweep-n", "sweep-axis", "evolve", "verify")
N_SWEEP_STATES = "coherent:pi/2,coherent:pi/4,ghz:pi/2,ghz:pi/4"
AXIS_SWEEP_STATES = "coherent:0,ghz:pi/2"


class ConfigError(ValueError):
    def __init__(self, field_name, message):
        super().__init__(f"{field_name}: {message}")
        self.field = field_name


@dataclass
class RunConfig:
    command: str
    state: str = "ghz:pi/2"
    states: str = ""
    n: int = 10
    theta: str | None = None
    phi: str | None = None
    axis_theta: str = "0"
    axis_phi: str = "0"
    measure: str = "m_tr,m_hs,m_sigma"
    weight: str = "power"
    sigma: str = "sqrt-NlogN"
    repr: str = "dicke"
    n_grid: str = "2:500"
    axis_points: int = 181
    channel: str = "dephasing"
    thetas: str = "pi/2,pi/4,pi/8"
    tau_max: float | None = None
    points: int = 200
    out: str | None = None
    format: str = "csv"
    seed: int = 0
    workers: int = 1
    plot: bool = False
    gnuplot: bool = False

    def validate(self):
        if self.command not in COMMANDS:
            raise ConfigError("command", f"must be one of {', '.join(COMMANDS)}")
        if int(self.n) < 1:
            raise ConfigError("n", "need at least one particle")
        for name in ("theta", "phi", "axis_theta", "axis_phi"):
            v = getattr(self, name)
            if v is not None:
                try:
                    ang = sweeps.parse_angle(v)
                except ValueError as e:
                    raise ConfigError(name, str(e)) from None
                if not math.isfinite(ang):
                    raise ConfigError(name, "angle must be finite")
        for m in self.measures:
            if m not in sweeps.MEASURES:
                raise ConfigError("measure", f"unknown measure {m!r}; choose from {', '.join(sweeps.MEASURES)}")
        if self.format not in ("csv", "json"):
            raise ConfigError("format", "must be csv or json")
        if self.repr not in (states.DICKE, states.FULL):
            raise ConfigError("repr", "must be dicke or full")
        if self.weight not in ("power", "scaled", "gaussian-g"):
            raise ConfigError("weight", "must be power, scaled or gaussian-g")
        if self.channel not in ("dephasing", "dissipation"):
            raise ConfigError("channel", "must be dephasing or dissipation")
        if self.sigma.lower() not in ("sqrt-nlogn", "sqrt-nlnn"):
            try:
                s = float(self.sigma)
            except ValueError:
                raise ConfigError("sigma", "must be a positive number or 'sqrt-NlogN'") from None
            if not s > 0:
                raise ConfigError("sigma", "must be positive")
        if self.command == "sweep-n" and not len(self.n_values):
            raise ConfigError("n_grid", "grid is empty")
        if self.axis_points < 1 or self.points < 1:
            raise ConfigError("points", "grids must be nonempty")
        return self

    @property
    def measures(self):
        return [m.strip() for m in self.measure.split(",") if m.strip()]

    @property
    def n_values(self):
        try:
            out = []
            for part in self.n_grid.split(","):
                if ":" in part:
                    bits = [int(b) for b in part.split(":")]
                    lo, hi = bits[0], bits[1]
                    step = bits[2] if len(bits) > 2 else 1
                    out.extend(range(lo, hi + 1, step))
                elif part.strip():
                    out.append(int(part))
        except ValueError:
            raise ConfigError("n_grid", f"cannot parse {self.n_grid!r}") from None
        if any(v < 2 for v in out) and self.sigma.lower().startswith("sqrt"):
            raise ConfigError("n_grid", "sigma = sqrt(N ln N) needs N >= 2")
        return out

    def state_specs(self, default):
        text = self.states or default
        try:
            specs = [sweeps.StateSpec.parse(s) for s in text.split(",") if s.strip()]
        except ValueError as e:
            raise ConfigError("states", str(e)) from None
        if not specs:
            raise ConfigError("states", "no states given")
        return specs

    def single_state(self):
        try:
            spec = sweeps.StateSpec.parse(self.state)
        except ValueError as e:
            raise ConfigError("state", str(e)) from None
        if self.theta is not None or self.phi is not None:
            spec = sweeps.StateSpec(spec.family,
                                    sweeps.parse_angle(self.theta) if self.theta is not None else spec.theta,
                                    sweeps.parse_angle(self.phi) if self.phi is not None else spec.phi,
                                    spec.site_angles)
        return spec


def build_parser():
    p = argparse.ArgumentParser(prog="macrocoherence", description=__doc__.split("\n")[0],
                                formatter_class=argparse.RawDescriptionHelpFormatter)
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("--config", help="JSON file whose keys override the flags")
    p.add_argument("--state", help="state spec, e.g. ghz:pi/2, coherent:pi/4:0, product:0,0;pi/2,0")
    p.add_argument("--states", help="comma-separated state specs for sweeps")
    p.add_argument("--n", type=int, help="number of particles")
    p.add_argument("--theta", help="state polar angle (overrides the state spec)")
    p.add_argument("--phi", help="state azimuth (overrides the state spec)")
    p.add_argument("--axis-theta", help="polar angle of the collective spin axis")
    p.add_argument("--axis-phi", help="azimuth of the collective spin axis")
    p.add_argument("--measure", help=f"comma-separated subset of {','.join(sweeps.MEASURES)}")
    p.add_argument("--weight", help="weight for m_tr/m_hs: power (w^2), scaled, gaussian-g")
    p.add_argument("--sigma", help="cutoff: a positive number or sqrt-NlogN")
    p.add_argument("--repr", help="dicke (default) or full")
    p.add_argument("--n-grid", help="particle numbers, e.g. 2:500 or 50:500:50 or 3,8")
    p.add_argument("--axis-points", type=int, help="number of axis angles in [0, pi]")
    p.add_argument("--channel", help="dephasing or dissipation")
    p.add_argument("--thetas", help="GHZ angles for evolve")
    p.add_argument("--tau-max", type=float, help="final time for evolve")
    p.add_argument("--points", type=int, help="time points for evolve")
    p.add_argument("--out", help="output file (stdout if omitted)")
    p.add_argument("--format", choices=("csv", "json"))
    p.add_argument("--seed", type=int)
    p.add_argument("--workers", type=int, help="worker processes for sweeps")
    p.add_argument("--plot", action="store_true", default=None, help="also render a PNG next to --out")
    p.add_argument("--gnuplot", action="store_true", default=None,
                   help="also write a whitespace-separated .dat file with a '#' header")
    p.add_argument("-v", "--verbose", action="store_true")
    return p


def config_from_args(argv):
    args = build_parser().parse_args(argv)
    if args.verbose:
        logging.basicConfig(level=logging.INFO)
    values = {k: v for k, v in vars(args).items() if v is not None and k not in ("config", "verbose")}
    if args.config:
        try:
            with open(args.config) as fh:
                extra = json.load(fh)
        except (OSError, json.JSONDecodeError) as e:
            raise ConfigError("config", str(e)) from None
        if not isinstance(extra, dict):
            raise ConfigError("config", "top level must be an object")
        for k, v in extra.items():
            key = k.replace("-", "_")
            if key not in RunConfig.__dataclass_fields__:
                raise ConfigError(k, "unknown configuration key")
            values[key] = v
    for k in ("theta", "phi", "axis_theta", "axis_phi", "sigma"):
        if k in values and values[k] is not None:
            values[k] = str(values[k])
    return RunConfig(**values).validate()


# -- output ---------------------------------------------------------------------------

def fmt(x):
    if isinstance(x, (int, np.integer)) and not isinstance(x, bool):
        return str(int(x))
    return format(float(x), ".17g")


def to_csv(columns, rows):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    for r in rows:
        w.writerow([fmt(x) for x in r])
    return buf.getvalue()


def to_gnuplot(columns, rows):
    lines = ["# " + " ".join(c.replace(" ", "_") for c in columns)]
    lines += [" ".join(fmt(x) for x in r) for r in rows]
    return "\n".join(lines) + "\n"


def _jsonable(x):
    if isinstance(x, (np.integer,)):
        return int(x)
    if isinstance(x, (np.floating, float)):
        return float(x)
    return x


def emit(cfg, columns, rows, calls):
    meta = {
        "config": asdict(cfg),
        "version": __version__,
        "tolerances": tolerances.as_dict(),
        "columns": columns,
        "library_calls": calls,
    }
    if cfg.format == "json":
        text = json.dumps({**meta, "rows": [[_jsonable(x) for x in r] for r in rows]}, indent=1) + "\n"
    else:
        text = to_csv(columns, rows)
    if cfg.out is None:
        sys.stdout.write(text)
        return
    out = Path(cfg.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    out.write_text(text)
    if cfg.format == "csv":
        out.with_name(out.name + ".json").write_text(json.dumps(meta, indent=1) + "\n")
    if cfg.gnuplot:
        out.with_suffix(".dat").write_text(to_gnuplot(columns, rows))
    if cfg.plot and cfg.command in ("sweep-n", "sweep-axis", "evolve"):
        from .plotting import render
        render(cfg.command, columns, rows, out.with_suffix(".png"))


def _calls(measures, state_call, observable_call, sigma_note):
    return {m: f"{sweeps.RECIPES[m]} with state = {state_call}, L = {observable_call}, {sigma_note}"
            for m in measures}


# -- commands -------------------------------------------------------------------------

def run(cfg: RunConfig):
    """Execute one configured command; returns the process exit status."""
    axis = (sweeps.parse_angle(cfg.axis_theta), sweeps.parse_angle(cfg.axis_phi))
    repr_ = cfg.repr
    if cfg.command == "verify":
        from .acceptance import run_all
        results = run_all(seed=cfg.seed)
        width = max(len(r.name) for r in results)
        for r in results:
            print(f"{r.number:2d}  {'PASS' if r.passed else 'FAIL'}  {r.name:<{width}}  {r.detail}")
        return 0 if all(r.passed for r in results) else 1

    if cfg.command in ("measure", "modes"):
        spec = cfg.single_state()
        if spec.family == "product":
            repr_ = states.FULL
            n = len(spec.site_angles)
        else:
            n = int(cfg.n)
        state = spec.build(n, repr_)
        L = states.collective_spin(n, axis, repr_)
        sigma = sweeps.resolve_sigma(cfg.sigma, n) if (n > 1 or not cfg.sigma.lower().startswith("sqrt")) else None
        if cfg.command == "modes":
            cols, rows = sweeps.mode_table(state, L, sigma)
            calls = {"a_tr,a_hs": "asymmetry.mode_asymmetry(state, L, omega)"}
        else:
            if sigma is None and ("m_sigma" in cfg.measures or cfg.weight != "power"):
                raise ConfigError("sigma", "sqrt-NlogN is zero for N = 1; give a number")
            vals = sweeps.evaluate(state, L, cfg.measures, sigma, cfg.weight)
            cols = ["n", "axis_theta", "axis_phi", "sigma"] + cfg.measures
            rows = [[n, axis[0], axis[1], sigma if sigma is not None else float("nan")] + [vals[m] for m in cfg.measures]]
            calls = {}
        calls.update(_calls(cfg.measures, f"{spec.family} {spec}", f"states.collective_spin(n, axis, {repr_!r})",
                            f"sigma={cfg.sigma}"))
        emit(cfg, cols, rows, calls)
        return 0

    if cfg.command == "sweep-n":
        specs = cfg.state_specs(N_SWEEP_STATES)
        cols, rows = sweeps.sweep_n(specs, cfg.n_values, cfg.measures, cfg.sigma, cfg.weight, repr_, axis,
                                    cfg.workers)
        calls = _calls(cfg.measures, "StateSpec.parse(spec).build(n, repr)", "states.collective_spin(n, axis, repr)",
                       f"sigma={cfg.sigma}")
        emit(cfg, cols, rows, calls)
        return 0

    if cfg.command == "sweep-axis":
        specs = cfg.state_specs(AXIS_SWEEP_STATES)
        grid = np.linspace(0.0, np.pi, cfg.axis_points)
        cols, rows = sweeps.sweep_axis(specs, int(cfg.n), grid, cfg.measures, cfg.sigma, cfg.weight, axis[1],
                                       repr_, cfg.workers)
        calls = _calls(cfg.measures, "StateSpec.parse(spec).build(n, repr)",
                       "states.collective_spin(n, (axis_theta, axis_phi), repr)", f"sigma={cfg.sigma}")
        emit(cfg, cols, rows, calls)
        return 0

    if cfg.command == "evolve":
        n = int(cfg.n)
        try:
            thetas = [sweeps.parse_angle(t) for t in cfg.thetas.split(",")]
        except ValueError as e:
            raise ConfigError("thetas", str(e)) from None
        taus = (np.linspace(0.0, cfg.tau_max, cfg.points) if cfg.tau_max
                else sweeps.default_taus(n, cfg.channel, cfg.points))
        cols, rows = sweeps.evolve_curves(n, thetas, cfg.channel, taus, cfg.sigma, repr_, cfg.workers)
        jump = "states.collective_spin(n).matrix" if cfg.channel == "dephasing" else "states.lowering_operator(n)"
        calls = {"m_sigma": f"macroscopicity.m_sigma(dynamics.evolve_to(states.ghz(n, theta), {jump}, taus)[i], "
                            f"states.collective_spin(n), sigma) with sigma={cfg.sigma}"}
        emit(cfg, cols, rows, calls)
        return 0
    raise ConfigError("command", cfg.command)


def main(argv=None):
    try:
        cfg = config_from_args(argv)
    except SystemExit as e:        # argparse reports usage errors with status 2
        return int(e.code or 0)
    except (ConfigError, MacroCoherenceError, TypeError, ValueError) as e:
        print(f"configuration error: {e}", file=sys.stderr)
        return 2
    try:
        return run(cfg)
    except ConfigError as e:
        print(f"configuration error: {e}", file=sys.stderr)
        return 2
    except (StepTooLarge, ArithmeticError, np.linalg.LinAlgError) as e:
        print(f"numerical failure: {e}", file=sys.stderr)
        return 1
    except MacroCoherenceError as e:
        print(f"configuration error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
