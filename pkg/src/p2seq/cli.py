"""Experiment runner: reproduces the case studies and sweeps as CSV files.

Modes
-----
reference      solve the field equation, write reference.csv
series         order build with error measures, write series.csv and
               term_profiles.csv
extraordinary  per-order interval/constant sequence and converted profiles,
               write abc_sequence.csv and y_profiles.csv
direct         fixed-interval perturbation of the converted instance,
               write direct.csv
sweep          one reference solve and conversion per mu value,
               write sweep.csv

Every mode also renders a PNG figure next to its CSVs unless --no-figures
is given.  Configuration comes from defaults, then an optional key=value
config file, then command-line overrides.  Numeric CSV fields carry 17
significant digits, and identical configurations produce byte-identical
CSV output.

Exit codes: 0 success, 2 configuration error, 3 solver failure, 4 sweep
finished with some failed points.  Failures leave a machine-readable
error.json in the output directory.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import figures
from .conversion import convert, convert_profile, extraordinary_sequence
from .direct import DIVERGENCE_CAP, DirectSeriesState, direct_partial_sums
from .errors import ConfigError, P2SeqError, ParameterError
from .mesh import Grid, MIN_NODES
from .params import Parameters
from .reference import solve_reference
from .series import MAX_ORDER, SeriesState, delta_sequence, extend_series

__all__ = ["ExperimentConfig", "run", "sweep_mu", "main"]

OUT_ENV_VAR = "P2SEQ_OUT"
MODES = ("reference", "series", "extraordinary", "direct", "sweep")
DEFAULT_PROFILE_ORDERS = (1, 2, 3, 4, 8, 9, 10, 11)

# Parameter box the studies stay inside; leaving the soft box only warns.
SOFT_NU_MAX = 10.0
SOFT_MU_MAX = 2.0


@dataclass(frozen=True)
class ExperimentConfig:
    params: Parameters
    mode: str
    grid_size: int = 2049
    n_max: int = 60
    tol: float = 1e-10
    out_dir: str = "out"
    sweep_param: str = "mu"
    sweep_start: float = -2.0
    sweep_stop: float = 2.0
    sweep_step: float = 0.1
    workers: int = 1
    profile_orders: tuple[int, ...] = DEFAULT_PROFILE_ORDERS
    figures: bool = True

    def __post_init__(self):
        if self.mode not in MODES:
            raise ConfigError(f"mode must be one of {MODES}, got {self.mode!r}")
        if self.grid_size < MIN_NODES or self.grid_size % 2 == 0:
            raise ConfigError(
                f"grid must be odd and >= {MIN_NODES}, got {self.grid_size}")
        if not 1 <= self.n_max <= MAX_ORDER:
            raise ConfigError(f"n_max must lie in [1, {MAX_ORDER}]")
        if self.tol < 1e-12:
            raise ConfigError("tol must be >= 1e-12")
        if self.sweep_param != "mu":
            raise ConfigError("only mu sweeps are supported")
        if self.mode == "sweep":
            if self.sweep_step <= 0:
                raise ConfigError("sweep_step must be positive")
            if self.sweep_stop < self.sweep_start:
                raise ConfigError("sweep_stop must be >= sweep_start")
        if self.workers < 1:
            raise ConfigError("workers must be >= 1")
        if any(n < 1 for n in self.profile_orders):
            raise ConfigError("profile orders must be positive")


def _fmt(x) -> str:
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    x = float(x)
    if np.isnan(x):
        return "nan"
    if np.isinf(x):
        return "inf" if x > 0 else "-inf"
    if x == 0.0:
        return "0"
    return format(x, ".17g")


def _write_csv(path, header, rows, comments=()):
    with open(path, "w", newline="\n") as fh:
        for line in comments:
            fh.write(f"# {line}\n")
        fh.write(header + "\n")
        for row in rows:
            fh.write(",".join(_fmt(v) if not isinstance(v, str) else v
                              for v in row) + "\n")


def parse_config_file(path: str) -> dict:
    """Flat key=value file; blank lines and # comments are ignored."""
    out = {}
    try:
        with open(path) as fh:
            for lineno, raw in enumerate(fh, 1):
                line = raw.strip()
                if not line or line.startswith("#"):
                    continue
                if "=" not in line:
                    raise ConfigError(
                        f"{path}:{lineno}: expected key=value, got {line!r}")
                key, _, value = line.partition("=")
                out[key.strip()] = value.strip()
    except OSError as exc:
        raise ConfigError(f"cannot read config file: {exc}") from exc
    return out


_FLOAT_KEYS = {"sigma", "tau", "nu", "mu", "tol",
               "sweep_start", "sweep_stop", "sweep_step"}
_INT_KEYS = {"grid", "n_max", "workers"}


def _coerce(key: str, value: str):
    try:
        if key in _FLOAT_KEYS:
            return float(value)
        if key in _INT_KEYS:
            return int(value)
        if key == "figures":
            if value.lower() in ("1", "true", "yes", "on"):
                return True
            if value.lower() in ("0", "false", "no", "off"):
                return False
            raise ValueError(value)
        if key == "profile_orders":
            return tuple(int(v) for v in value.split(",") if v.strip())
        return value
    except ValueError as exc:
        raise ConfigError(f"bad value for {key}: {value!r}") from exc


def build_config(argv=None) -> ExperimentConfig:
    parser = argparse.ArgumentParser(
        prog="p2seq",
        description="Field-equation solves, perturbation series and "
                    "Painleve II conversions, reported as CSV plus figures.")
    parser.add_argument("--config", help="key=value config file")
    parser.add_argument("--mode", choices=MODES)
    parser.add_argument("--sigma", type=float)
    parser.add_argument("--tau", type=float)
    parser.add_argument("--nu", type=float)
    parser.add_argument("--mu", type=float)
    parser.add_argument("--grid", type=int, help="node count (odd, >= 257)")
    parser.add_argument("--n-max", type=int, dest="n_max")
    parser.add_argument("--tol", type=float)
    parser.add_argument("--out", help=f"output directory (default ${OUT_ENV_VAR} or ./out)")
    parser.add_argument("--sweep-start", type=float, dest="sweep_start")
    parser.add_argument("--sweep-stop", type=float, dest="sweep_stop")
    parser.add_argument("--sweep-step", type=float, dest="sweep_step")
    parser.add_argument("--workers", type=int)
    parser.add_argument("--profile-orders", dest="profile_orders",
                        help="comma-separated orders for profile CSVs")
    parser.add_argument("--no-figures", action="store_true")
    args = parser.parse_args(argv)

    settings = {
        "mode": "reference", "sigma": 1.0 / 3.0, "tau": -0.2, "nu": 3.5,
        "mu": 2.0, "grid": 2049, "n_max": 60, "tol": 1e-10,
        "out": os.environ.get(OUT_ENV_VAR, "out"),
        "sweep_start": -2.0, "sweep_stop": 2.0, "sweep_step": 0.1,
        "workers": 1, "profile_orders": DEFAULT_PROFILE_ORDERS,
        "figures": True,
    }
    if args.config:
        for key, raw in parse_config_file(args.config).items():
            if key not in settings:
                raise ConfigError(f"unknown config key {key!r}")
            settings[key] = _coerce(key, raw)
    for key in ("mode", "sigma", "tau", "nu", "mu", "grid", "n_max", "tol",
                "out", "sweep_start", "sweep_stop", "sweep_step", "workers"):
        val = getattr(args, key)
        if val is not None:
            settings[key] = val
    if args.profile_orders is not None:
        settings["profile_orders"] = _coerce("profile_orders", args.profile_orders)
    if args.no_figures:
        settings["figures"] = False

    try:
        params = Parameters(sigma=settings["sigma"], tau=settings["tau"],
                            nu=settings["nu"], mu=settings["mu"])
    except ParameterError as exc:
        raise ConfigError(str(exc)) from exc
    return ExperimentConfig(
        params=params, mode=settings["mode"], grid_size=settings["grid"],
        n_max=settings["n_max"], tol=settings["tol"], out_dir=settings["out"],
        sweep_start=settings["sweep_start"], sweep_stop=settings["sweep_stop"],
        sweep_step=settings["sweep_step"], workers=settings["workers"],
        profile_orders=tuple(settings["profile_orders"]),
        figures=settings["figures"])


def _soft_warnings(config: ExperimentConfig):
    p = config.params
    mus = [p.mu]
    if config.mode == "sweep":
        mus = [config.sweep_start, config.sweep_stop]
    if p.nu > SOFT_NU_MAX or any(abs(m) > SOFT_MU_MAX for m in mus):
        print(f"warning: outside the studied box nu <= {SOFT_NU_MAX:g}, "
              f"|mu| <= {SOFT_MU_MAX:g}; series may not settle",
              file=sys.stderr)


def _mode_reference(config, grid, out):
    sol = solve_reference(config.params, grid, config.tol)
    comments = (f"e0={_fmt(sol.e0)}", f"e1={_fmt(sol.e1)}",
                f"type={sol.solution_type.value}",
                f"residual={_fmt(sol.residual_norm)}")
    rows = zip(grid.nodes, sol.profile.values, sol.profile.derivs)
    _write_csv(os.path.join(out, "reference.csv"), "x,E,Eprime", rows, comments)
    if config.figures:
        figures.render_reference(grid.nodes, sol.profile.values,
                                 sol.profile.derivs,
                                 os.path.join(out, "reference.png"))
    return sol


def _mode_series(config, grid, out):
    sol = solve_reference(config.params, grid, config.tol)
    state = extend_series(SeriesState(config.params, grid), config.n_max)
    deltas = delta_sequence(state, sol)
    orders = np.arange(1, config.n_max + 1)
    log10 = np.log10(np.maximum(deltas, np.finfo(float).tiny))
    _write_csv(os.path.join(out, "series.csv"), "n,log10_delta",
               zip(orders, log10))
    prof_orders = [n for n in config.profile_orders if n <= config.n_max]
    rows = []
    for n in prof_orders:
        t = state.terms[n - 1]
        for x, v, d in zip(grid.nodes, t.profile.values, t.profile.derivs):
            rows.append((n, x, v, d))
    _write_csv(os.path.join(out, "term_profiles.csv"), "n,x,En,Enprime", rows)
    if config.figures:
        figures.render_series(orders, log10, os.path.join(out, "series.png"))
    return state


def _mode_extraordinary(config, grid, out):
    sol = solve_reference(config.params, grid, config.tol)
    state = extend_series(SeriesState(config.params, grid), config.n_max)
    seq = extraordinary_sequence(state, config.n_max)
    rows = []
    for ap in seq:
        if ap.valid:
            i = ap.instance
            rows.append((ap.order, i.a, i.b, i.c, i.beta, i.gamma, 1))
        else:
            nan = float("nan")
            rows.append((ap.order, nan, nan, nan, nan, nan, 0))
    _write_csv(os.path.join(out, "abc_sequence.csv"),
               "n,a_n,b_n,C_n,beta_n,gamma_n,valid", rows)

    inst = convert(sol.e0, sol.e1, config.params)
    ref_profile = convert_profile(sol.profile, inst)
    prof_orders = [n for n in config.profile_orders if n <= config.n_max]
    rows = [(0, z, y) for z, y in zip(ref_profile.z, ref_profile.values)]
    groups = [("reference", ref_profile.z, ref_profile.values)]
    for n in prof_orders:
        ap = seq[n - 1]
        if not ap.valid:
            continue
        for z, y in zip(ap.profile.z, ap.profile.values):
            rows.append((n, z, y))
        groups.append((f"n={n}", ap.profile.z, ap.profile.values))
    _write_csv(os.path.join(out, "y_profiles.csv"), "n,z,y", rows)
    if config.figures:
        valid = [ap for ap in seq if ap.valid]
        figures.render_abc([ap.order for ap in valid],
                           [ap.instance.a for ap in valid],
                           [ap.instance.b for ap in valid],
                           [ap.instance.c for ap in valid],
                           os.path.join(out, "extraordinary_abc.png"))
        figures.render_profiles(groups, os.path.join(out, "y_profiles.png"))
    return seq


def _mode_direct(config, grid, out):
    from .direct import _fires_growth

    sol = solve_reference(config.params, grid, config.tol)
    inst = convert(sol.e0, sol.e1, config.params)
    ref_profile = convert_profile(sol.profile, inst)
    n_orders = min(config.n_max, DIVERGENCE_CAP)
    state = DirectSeriesState(inst, grid)
    disc, _ = direct_partial_sums(state, ref_profile, n_orders)
    rows = []
    verdict = "undecided"
    for i, d in enumerate(disc):
        if verdict != "diverged" and _fires_growth(disc[:i + 1]):
            verdict = "diverged"
        elif verdict == "undecided" and d <= 1e-6:
            verdict = "converged"
        rows.append((i + 1, d, verdict))
    _write_csv(os.path.join(out, "direct.csv"), "n,sup_discrepancy,verdict", rows)
    if config.figures:
        figures.render_direct(np.arange(1, n_orders + 1), disc,
                              os.path.join(out, "direct.png"))
    return disc


def _sweep_point(args) -> dict:
    sigma, tau, nu, mu, grid_size, tol = args
    row = {"mu": mu, "a": float("nan"), "b": float("nan"), "C": float("nan"),
           "e0": float("nan"), "e1": float("nan"), "converged": 0}
    try:
        params = Parameters(sigma=sigma, tau=tau, nu=nu, mu=mu)
        grid = Grid.uniform(grid_size)
        sol = solve_reference(params, grid, tol)
        inst = convert(sol.e0, sol.e1, params)
    except P2SeqError:
        return row
    row.update(a=inst.a, b=inst.b, C=inst.c, e0=sol.e0, e1=sol.e1, converged=1)
    return row


def sweep_mu(config: ExperimentConfig) -> list[dict]:
    """One reference solve and conversion per mu; failures are flagged rows."""
    n_steps = int(round((config.sweep_stop - config.sweep_start) / config.sweep_step))
    mus = [config.sweep_start + i * config.sweep_step for i in range(n_steps + 1)]
    p = config.params
    jobs = [(p.sigma, p.tau, p.nu, mu, config.grid_size, config.tol) for mu in mus]
    if config.workers == 1:
        rows = [_sweep_point(job) for job in jobs]
    else:
        with ProcessPoolExecutor(max_workers=config.workers) as pool:
            rows = list(pool.map(_sweep_point, jobs))
    rows.sort(key=lambda r: r["mu"])
    return rows


def _mode_sweep(config, grid, out):
    rows = sweep_mu(config)
    _write_csv(os.path.join(out, "sweep.csv"), "mu,a,b,C,e0,e1,converged",
               [(r["mu"], r["a"], r["b"], r["C"], r["e0"], r["e1"], r["converged"])
                for r in rows])
    if config.figures:
        ok = [r for r in rows if r["converged"]]
        figures.render_sweep([r["mu"] for r in ok], [r["a"] for r in ok],
                             [r["b"] for r in ok], [r["C"] for r in ok],
                             os.path.join(out, "sweep.png"))
    return rows


def run(config: ExperimentConfig) -> int:
    """Execute one experiment; returns the process exit code."""
    os.makedirs(config.out_dir, exist_ok=True)
    _soft_warnings(config)
    grid = Grid.uniform(config.grid_size)
    try:
        if config.mode == "reference":
            _mode_reference(config, grid, config.out_dir)
        elif config.mode == "series":
            _mode_series(config, grid, config.out_dir)
        elif config.mode == "extraordinary":
            _mode_extraordinary(config, grid, config.out_dir)
        elif config.mode == "direct":
            _mode_direct(config, grid, config.out_dir)
        elif config.mode == "sweep":
            rows = _mode_sweep(config, grid, config.out_dir)
            if any(not r["converged"] for r in rows):
                return 4
    except P2SeqError as exc:
        record = {"stage": config.mode, "error": type(exc).__name__,
                  "message": str(exc),
                  "params": {"sigma": config.params.sigma,
                             "tau": config.params.tau,
                             "nu": config.params.nu,
                             "mu": config.params.mu}}
        with open(os.path.join(config.out_dir, "error.json"), "w") as fh:
            json.dump(record, fh, indent=2)
        print(json.dumps(record), file=sys.stderr)
        return 3
    return 0


def main(argv=None) -> int:
    try:
        config = build_config(argv)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except SystemExit as exc:
        # argparse handles --help (0) and usage errors (2) itself
        return exc.code if isinstance(exc.code, int) else 2
    return run(config)


if __name__ == "__main__":
    sys.exit(main())
