"""Command-line entry point.

Subcommands: run, sweep-gamma, sweep-size, gge, selfcheck.
Exit codes: 0 success, 2 usage/config error, 3 numerical integrity error.
Worker count comes from the MONBCS_WORKERS environment variable;
everything else lives in the config file (plus --set key=value overrides).
"""

from __future__ import annotations

import argparse
import os
import sys
import time

from .engine import (TrajectoryConfig, gamma_sweep, run_ensemble,
                     size_scaling_fit, write_entropy_timeseries,
                     write_gamma_peak, write_gamma_sweep, write_manifest,
                     write_scaling_fit, write_steady_state, _write_csv,
                     _STEADY_HEADER, _steady_row)
from .errors import ConfigError, IntegrityError, NumericsError
from .gge import gge_table
from .lattice import RunConfig, default_window, load_config

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_INTEGRITY = 3

MANIFEST_NAME = "manifest.txt"


def _parse_overrides(pairs) -> dict[str, str]:
    out = {}
    for item in pairs or ():
        if "=" not in item:
            raise ConfigError(f"--set expects key=value, got {item!r}")
        key, val = item.split("=", 1)
        out[key.strip()] = val
    return out


def _prepare_outdir(path: str, overwrite: bool) -> None:
    os.makedirs(path, exist_ok=True)
    manifest = os.path.join(path, MANIFEST_NAME)
    if os.path.exists(manifest) and not overwrite:
        raise ConfigError(
            f"{path} already contains a manifest; pass --overwrite to clobber"
        )


def _parse_float_list(text: str, what: str) -> list[float]:
    items = [s for s in text.split(",") if s.strip()]
    if not items:
        raise ConfigError(f"{what} list is empty")
    try:
        return [float(s) for s in items]
    except ValueError as exc:
        raise ConfigError(f"cannot parse {what} list {text!r}") from exc


def cmd_run(args) -> int:
    rc = load_config(args.config, _parse_overrides(args.set))
    _prepare_outdir(rc.output_dir, args.overwrite)
    t0 = time.perf_counter()
    config = TrajectoryConfig.from_run_config(rc)
    res = run_ensemble(config)
    write_entropy_timeseries(res, os.path.join(rc.output_dir, "entropy_timeseries.csv"))
    write_steady_state(config, res, os.path.join(rc.output_dir, "steady_state.csv"))
    write_manifest(os.path.join(rc.output_dir, MANIFEST_NAME), rc.as_dict(),
                   time.perf_counter() - t0)
    return EXIT_OK


def cmd_sweep_gamma(args) -> int:
    rc = load_config(args.config, _parse_overrides(args.set))
    gammas = _parse_float_list(args.gammas, "gamma")
    if any(b <= a for a, b in zip(gammas, gammas[1:])):
        raise ConfigError("gamma list must be strictly ascending")
    _prepare_outdir(rc.output_dir, args.overwrite)
    t0 = time.perf_counter()
    config = TrajectoryConfig.from_run_config(rc)
    rows, peak = gamma_sweep(config, gammas)
    write_gamma_sweep(config, rows, os.path.join(rc.output_dir, "gamma_sweep.csv"))
    if peak is not None:
        write_gamma_peak(peak, os.path.join(rc.output_dir, "gamma_peak.csv"))
    manifest = rc.as_dict()
    manifest["gamma_grid"] = ";".join(f"{g:g}" for g in gammas)
    write_manifest(os.path.join(rc.output_dir, MANIFEST_NAME), manifest,
                   time.perf_counter() - t0)
    return EXIT_OK


def cmd_sweep_size(args) -> int:
    rc = load_config(args.config, _parse_overrides(args.set))
    sizes = [int(x) for x in _parse_float_list(args.sizes, "size")]
    if len(set(sizes)) < 3:
        raise ConfigError("sweep-size needs at least 3 distinct L values")
    if any(b <= a for a, b in zip(sizes, sizes[1:])):
        raise ConfigError("size list must be strictly ascending")
    _prepare_outdir(rc.output_dir, args.overwrite)
    t0 = time.perf_counter()
    explicit_window = "window_start" in open(args.config).read()
    rows, fit_input = [], []
    for L in sizes:
        scale = L / rc.L
        if explicit_window:
            window = (rc.window_start, rc.window_end)
            t_max = rc.t_max
        else:
            t_max = rc.t_max * scale
            start, end = default_window(L)
            if end > t_max:
                start, end = t_max / 2, t_max
            window = (start, end)
        cfg = TrajectoryConfig(
            params=rc.params.__class__(L=L, J=rc.J, delta=rc.delta,
                                       gamma=rc.gamma, dt=rc.dt),
            t_max=t_max, window=window, n_traj=rc.n_traj, base_seed=rc.seed,
            init_state=rc.init_state)
        res = run_ensemble(cfg)
        rows.append(_steady_row(cfg, res))
        fit_input.append((L, res.s_steady, res.s_steady_err))
    _write_csv(os.path.join(rc.output_dir, "steady_state.csv"),
               _STEADY_HEADER, rows)
    lam, intercept, r2 = size_scaling_fit(fit_input)
    write_scaling_fit(rc.delta, rc.gamma, lam, intercept, r2, sizes,
                      os.path.join(rc.output_dir, "scaling_fit.csv"))
    manifest = rc.as_dict()
    manifest["size_grid"] = ";".join(str(s) for s in sizes)
    write_manifest(os.path.join(rc.output_dir, MANIFEST_NAME), manifest,
                   time.perf_counter() - t0)
    return EXIT_OK


def cmd_gge(args) -> int:
    deltas = _parse_float_list(args.deltas, "delta")
    rows = gge_table(deltas, J=args.j)
    # analytic reference values get extra digits (the engine CSVs stay at 9)
    with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("delta,c_delta,tau_over_L,nn_pairing\n")
        for r in rows:
            fh.write(f"{r['delta']:.12g},{r['c_delta']:.12g},"
                     f"{r['tau_over_L']:.12g},{r['nn_pairing']:.12g}\n")
    return EXIT_OK


def cmd_selfcheck(args) -> int:
    from .selfcheck import run_selfcheck
    ok = run_selfcheck()
    print("selfcheck:", "PASS" if ok else "FAIL")
    return EXIT_OK if ok else EXIT_INTEGRITY


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="monbcs",
                                 description="Monitored BCS chain simulator")
    sub = ap.add_subparsers(dest="command", required=True)

    def add_config_cmd(name, fn, help_):
        p = sub.add_parser(name, help=help_)
        p.add_argument("config", help="run configuration file (key = value lines)")
        p.add_argument("--set", action="append", metavar="KEY=VALUE",
                       help="override a config key")
        p.add_argument("--overwrite", action="store_true",
                       help="allow writing into a directory with an existing manifest")
        p.set_defaults(fn=fn)
        return p

    add_config_cmd("run", cmd_run, "run one ensemble, write time series + steady state")
    p = add_config_cmd("sweep-gamma", cmd_sweep_gamma,
                       "ensembles over a gamma grid, write sweep + peak tables")
    p.add_argument("--gammas", required=True,
                   help="comma-separated ascending measurement rates")
    p = add_config_cmd("sweep-size", cmd_sweep_size,
                       "ensembles over system sizes, write ln^2 L scaling fit")
    p.add_argument("--sizes", required=True,
                   help="comma-separated ascending system sizes (>= 3)")

    p = sub.add_parser("gge", help="emit the analytic GGE table as CSV")
    p.add_argument("--deltas", required=True,
                   help="comma-separated pairing strengths")
    p.add_argument("--j", type=float, default=1.0, help="hopping amplitude")
    p.add_argument("--out", default="gge.csv", help="output CSV path")
    p.set_defaults(fn=cmd_gge)

    p = sub.add_parser("selfcheck", help="run the invariant suite at L=8")
    p.set_defaults(fn=cmd_selfcheck)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        return args.fn(args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (IntegrityError, NumericsError) as exc:
        print(f"integrity error: {exc}", file=sys.stderr)
        return EXIT_INTEGRITY


if __name__ == "__main__":
    sys.exit(main())
