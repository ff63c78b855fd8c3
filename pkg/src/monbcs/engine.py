"""Trajectory and ensemble orchestration.

A trajectory is a deterministic function of (config, traj_id): the RNG
is Philox keyed by splitmix64(base_seed, traj_id), BLAS is pinned to one
thread while a trajectory runs, and ensembles reduce in ascending
traj_id order, so results are bit-identical for any worker count.

Worker count comes from the MONBCS_WORKERS environment variable
(default: all cores).
"""

from __future__ import annotations

import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np
from threadpoolctl import threadpool_limits

from . import _kernels
from .bdg import build_bdg, build_propagator
from .errors import ConfigError, IntegrityError
from .gaussian_state import ABORT_THRESHOLD, neel_covariance, vacuum_covariance
from .lattice import ModelParams, RunConfig, Spin, default_window
from .measurement import P_MIN, MeasurementRecord, RngStream
from .observables import OBSERVABLES, Region
from .sector import (collapse_target, purify, sector_from_state,
                     state_from_sector)

N_SYM = 100          # hermitize cadence for pure unitary stretches
DEFAULT_OBS_STRIDE = 10
DEFAULT_OBSERVABLES = ("entropy", "nn_pairing")


@dataclass(frozen=True)
class TrajectoryConfig:
    params: ModelParams
    t_max: float
    window: tuple[float, float] | None = None
    n_traj: int = 1
    base_seed: int = 0
    init_state: str = "neel"
    cut: int | None = None
    obs_stride: int = DEFAULT_OBS_STRIDE
    observables: tuple[str, ...] = DEFAULT_OBSERVABLES
    collect_records: bool = False

    def __post_init__(self) -> None:
        if self.init_state not in ("neel", "vacuum"):
            raise ConfigError(f"unknown init_state {self.init_state!r}")
        if self.n_traj < 1:
            raise ConfigError("n_traj must be >= 1")
        if self.obs_stride < 1:
            raise ConfigError("obs_stride must be >= 1")
        if self.window is not None:
            a, b = self.window
            if not (0 <= a < b <= self.t_max + 1e-9):
                raise ConfigError(f"window [{a}, {b}] not within [0, t_max]")
        for name in self.observables:
            if name not in OBSERVABLES:
                raise ConfigError(f"unknown observable {name!r}")

    @classmethod
    def from_run_config(cls, rc: RunConfig, **kw) -> "TrajectoryConfig":
        return cls(params=rc.params, t_max=rc.t_max,
                   window=(rc.window_start, rc.window_end), n_traj=rc.n_traj,
                   base_seed=rc.seed, init_state=rc.init_state, cut=rc.cut, **kw)

    @property
    def effective_window(self) -> tuple[float, float]:
        return self.window if self.window is not None else default_window(self.params.L)

    @property
    def effective_cut(self) -> int:
        return self.cut if self.cut is not None else self.params.L // 2

    @property
    def n_steps(self) -> int:
        return int(round(self.t_max / self.params.dt))


@dataclass
class TrajectoryResult:
    traj_id: int
    times: np.ndarray
    series: dict[str, np.ndarray]
    window_means: dict[str, float]
    records: list[MeasurementRecord] = field(default_factory=list)


@dataclass
class EnsembleResult:
    times: np.ndarray
    mean_S: np.ndarray
    stderr_S: np.ndarray
    mean_nn_pairing: np.ndarray
    stderr_nn_pairing: np.ndarray
    s_steady: float
    s_steady_err: float
    nn_steady: float
    nn_steady_err: float
    n_traj_effective: int = 0


def _mean_stderr(values: np.ndarray, axis=0) -> tuple[np.ndarray, np.ndarray]:
    """Sample mean and stddev/sqrt(n); stderr is 0 by convention for n = 1.

    Columns where every trajectory agrees bitwise (e.g. gamma = 0) return
    the common value and an exact zero, untouched by summation rounding.
    """
    n = values.shape[axis]
    mean = values.mean(axis=axis)
    if n < 2:
        return mean, np.zeros_like(mean)
    err = values.std(axis=axis, ddof=1) / np.sqrt(n)
    first = np.take(values, 0, axis=axis)
    identical = np.ptp(values, axis=axis) == 0
    mean = np.where(identical, first, mean)
    err = np.where(identical, 0.0, err)
    return mean, err


def steady_state_value(times: np.ndarray, per_traj: np.ndarray,
                       window: tuple[float, float]) -> tuple[float, float]:
    """Window-time-average each trajectory first, then ensemble mean/stderr."""
    a, b = window
    mask = (times >= a - 1e-9) & (times <= b + 1e-9)
    if not mask.any():
        raise ConfigError(f"window [{a}, {b}] contains no samples")
    per_traj = np.atleast_2d(per_traj)
    win_means = per_traj[:, mask].mean(axis=1)
    mean, err = _mean_stderr(win_means)
    return float(mean), float(err)


def _initial_state(config: TrajectoryConfig):
    L = config.params.L
    if config.init_state == "neel":
        return neel_covariance(L)
    return vacuum_covariance(L, allow_odd=config.params.allow_odd_L)


def _sample_steps(config: TrajectoryConfig) -> np.ndarray:
    return np.arange(0, config.n_steps + 1, config.obs_stride)


def _measure_observables(G, config: TrajectoryConfig, region: Region) -> dict[str, float]:
    state = state_from_sector(G)
    return {name: OBSERVABLES[name](state, region) for name in config.observables}


def _window_means(times, series, config: TrajectoryConfig) -> dict[str, float]:
    """Per-trajectory window-time-averages of the scalar observable series."""
    a, b = config.effective_window
    mask = (times >= a - 1e-9) & (times <= b + 1e-9)
    out = {}
    for name, vals in series.items():
        if vals.ndim != 1:
            continue
        out[name] = float(vals[mask].mean()) if mask.any() else float("nan")
    return out


def _check_sector_integrity(G, traj_id: int, step: int) -> None:
    sd = _kernels.max_offband_defect(G)
    if sd > ABORT_THRESHOLD:
        raise IntegrityError(
            f"trajectory {traj_id}, step {step}: symmetry defect {sd:.3e}"
        )
    pd = np.abs(G @ G - G).max()
    if pd > ABORT_THRESHOLD:
        raise IntegrityError(
            f"trajectory {traj_id}, step {step}: purity defect {pd:.3e}"
        )


def _run_monitored(config: TrajectoryConfig, traj_id: int) -> TrajectoryResult:
    params = config.params
    L, dt, p = params.L, params.dt, params.p_measure
    rng = RngStream.for_trajectory(config.base_seed, traj_id)
    region = Region(1, config.effective_cut)
    prop = build_propagator(build_bdg(params), dt)
    va = prop.v_sector
    vad = np.ascontiguousarray(va.conj().T)
    G = sector_from_state(_initial_state(config))
    buf = np.empty_like(G)

    sample_steps = _sample_steps(config)
    times = sample_steps * dt
    samples: dict[str, list] = {name: [] for name in config.observables}
    records: list[MeasurementRecord] = []
    sample_i = 0

    def take_sample(step):
        # Rare Born branches with probability near P_MIN amplify float
        # noise by 1/sqrt(n) in a single update; repair before anything
        # observes the state (nothing reads it between samples).
        nonlocal G, sample_i
        _kernels.hermitize(G)
        G = np.ascontiguousarray(purify(G))
        _check_sector_integrity(G, traj_id, step)
        obs = _measure_observables(G, config, region)
        for name, val in obs.items():
            samples[name].append(val)
        sample_i += 1

    take_sample(0)
    next_sample = sample_i * config.obs_stride if len(sample_steps) > 1 else -1
    for step in range(1, config.n_steps + 1):
        np.matmul(va, G, out=buf)
        np.matmul(buf, vad, out=G)
        r = rng.uniform(L)
        selected = np.nonzero(r < p)[0]
        if selected.size:
            t_now = step * dt
            xs = rng.uniform(2 * selected.size)
            k = 0
            for s0 in selected:
                site = int(s0) + 1
                for spin in (Spin.UP, Spin.DOWN):
                    m = s0 if spin is Spin.UP else L + s0
                    g = G[m, m].real
                    n_occ = 1.0 - g if spin is Spin.UP else g
                    x = xs[k]
                    k += 1
                    if n_occ >= 1.0 - P_MIN:
                        occupied, forced = True, True
                    elif n_occ <= P_MIN:
                        occupied, forced = False, True
                    else:
                        occupied, forced = x <= n_occ, False
                    target = collapse_target(spin, occupied)
                    if forced:
                        _kernels.pin_mode(G, m, target)
                    else:
                        _kernels.apply_projection(G, m, target)
                    if config.collect_records:
                        records.append(MeasurementRecord(
                            t=t_now, site=site, spin=spin,
                            outcome="occupied" if occupied else "empty",
                            born_p=float(min(max(n_occ, 0.0), 1.0))))
                _kernels.hermitize(G)
        if step % N_SYM == 0:
            _kernels.hermitize(G)
            G = np.ascontiguousarray(purify(G))
        if step == next_sample:
            take_sample(step)
            next_sample = (sample_i * config.obs_stride
                           if sample_i < len(sample_steps) else -1)

    series = {name: np.array(vals) for name, vals in samples.items()}
    return TrajectoryResult(traj_id=traj_id, times=times, series=series,
                            window_means=_window_means(times, series, config),
                            records=records)


def _run_unmonitored(config: TrajectoryConfig, traj_id: int) -> TrajectoryResult:
    """gamma = 0 fast path: diagonal phases in the BdG eigenbasis, exact."""
    params = config.params
    dt = params.dt
    region = Region(1, config.effective_cut)
    prop = build_propagator(build_bdg(params), dt)
    eps, Q = prop.sector_energies, prop.sector_modes
    Qd = Q.conj().T
    G0 = sector_from_state(_initial_state(config))
    Gt0 = Qd @ G0 @ Q

    sample_steps = _sample_steps(config)
    times = sample_steps * dt
    samples: dict[str, list] = {name: [] for name in config.observables}
    for t in times:
        ph = np.exp(-1j * eps * t)
        G = Q @ ((ph[:, None] * Gt0) * ph.conj()[None, :]) @ Qd
        obs = _measure_observables(G, config, region)
        for name, val in obs.items():
            samples[name].append(val)

    series = {name: np.array(vals) for name, vals in samples.items()}
    return TrajectoryResult(traj_id=traj_id, times=times, series=series,
                            window_means=_window_means(times, series, config))


def run_trajectory(config: TrajectoryConfig, traj_id: int,
                   force_slow: bool = False) -> TrajectoryResult:
    """One stochastic trajectory; deterministic in (config, traj_id)."""
    with threadpool_limits(limits=1):
        if config.params.p_measure == 0.0 and not force_slow:
            return _run_unmonitored(config, traj_id)
        return _run_monitored(config, traj_id)


def _trajectory_worker(payload) -> TrajectoryResult:
    config, traj_id = payload
    return run_trajectory(config, traj_id)


def worker_count(n_traj: int) -> int:
    env = os.environ.get("MONBCS_WORKERS")
    if env:
        try:
            w = int(env)
        except ValueError:
            raise ConfigError(f"MONBCS_WORKERS must be an integer, got {env!r}")
        if w < 1:
            raise ConfigError("MONBCS_WORKERS must be >= 1")
    else:
        w = os.cpu_count() or 1
    return max(1, min(w, n_traj))


def _warm_kernels() -> None:
    """Compile the jitted kernels once in this process.

    Called before forking workers so children inherit compiled code
    instead of racing on the on-disk jit cache.
    """
    g = np.zeros((2, 2), dtype=np.complex128)
    g[0, 0] = 1.0
    _kernels.apply_projection(g, 0, 1)
    _kernels.pin_mode(g, 1, 0)
    _kernels.hermitize(g)
    _kernels.max_offband_defect(g)


def run_ensemble(config: TrajectoryConfig) -> EnsembleResult:
    """n_traj independent trajectories, reduced in ascending traj_id order.

    A trajectory failure aborts the whole ensemble; silent dropping would
    bias the averages.
    """
    n = config.n_traj
    workers = worker_count(n)
    ids = list(range(n))
    if workers > 1:
        _warm_kernels()
    if workers == 1:
        results = [run_trajectory(config, i) for i in ids]
    else:
        import multiprocessing as mp
        ctx = mp.get_context("fork")
        with ProcessPoolExecutor(max_workers=workers, mp_context=ctx) as pool:
            results = list(pool.map(_trajectory_worker,
                                    [(config, i) for i in ids], chunksize=1))
    results.sort(key=lambda r: r.traj_id)
    return reduce_ensemble(config, results)


def reduce_ensemble(config: TrajectoryConfig,
                    results: list[TrajectoryResult]) -> EnsembleResult:
    times = results[0].times
    S = np.stack([r.series["entropy"] for r in results])
    NN = np.stack([r.series["nn_pairing"] for r in results])
    mean_S, stderr_S = _mean_stderr(S)
    mean_NN, stderr_NN = _mean_stderr(NN)
    s_mean, s_err = _mean_stderr(
        np.array([r.window_means["entropy"] for r in results]))
    nn_mean, nn_err = _mean_stderr(
        np.array([r.window_means["nn_pairing"] for r in results]))
    res = EnsembleResult(
        times=times, mean_S=mean_S, stderr_S=stderr_S,
        mean_nn_pairing=mean_NN, stderr_nn_pairing=stderr_NN,
        s_steady=float(s_mean), s_steady_err=float(s_err),
        nn_steady=float(nn_mean), nn_steady_err=float(nn_err))
    res.n_traj_effective = len(results)
    return res


# --------------------------------------------------------------------------
# Sweeps and fits
# --------------------------------------------------------------------------

def gamma_sweep(config: TrajectoryConfig, gammas: list[float]):
    """Run an ensemble per gamma; returns (rows, peak or None).

    gammas must be sorted ascending.  The discrete argmax of s_steady is
    reported with the neighboring grid spacing as its uncertainty (ties
    break toward smaller gamma); it needs at least 3 grid points.
    """
    if not gammas:
        raise ConfigError("gamma grid is empty")
    if any(b <= a for a, b in zip(gammas, gammas[1:])):
        raise ConfigError("gamma grid must be strictly ascending")
    rows = []
    for g in gammas:
        params = ModelParams(L=config.params.L, J=config.params.J,
                             delta=config.params.delta, gamma=float(g),
                             dt=config.params.dt)
        cfg = TrajectoryConfig(params=params, t_max=config.t_max,
                               window=config.window, n_traj=config.n_traj,
                               base_seed=config.base_seed,
                               init_state=config.init_state, cut=config.cut,
                               obs_stride=config.obs_stride,
                               observables=config.observables)
        res = run_ensemble(cfg)
        rows.append({"gamma": float(g), "s_steady": res.s_steady,
                     "s_steady_err": res.s_steady_err,
                     "nn_steady": res.nn_steady,
                     "nn_steady_err": res.nn_steady_err})
    peak = None
    if len(gammas) >= 3:
        s = np.array([r["s_steady"] for r in rows])
        i = int(np.argmax(s))
        spacings = []
        if i > 0:
            spacings.append(gammas[i] - gammas[i - 1])
        if i < len(gammas) - 1:
            spacings.append(gammas[i + 1] - gammas[i])
        peak = {"delta": config.params.delta, "L": config.params.L,
                "gamma_peak": float(gammas[i]),
                "gamma_grid_spacing": float(max(spacings))}
    return rows, peak


def size_scaling_fit(results: list[tuple[int, float, float]]):
    """Weighted least squares of s_steady against ln^2 L.

    Weights are 1/err^2 when every error is positive, uniform otherwise.
    Returns (lambda, intercept, r_squared).
    """
    if len({L for L, _, _ in results}) < 3:
        raise ConfigError("size_scaling_fit needs at least 3 distinct L values")
    L = np.array([r[0] for r in results], dtype=float)
    y = np.array([r[1] for r in results], dtype=float)
    err = np.array([r[2] for r in results], dtype=float)
    x = np.log(L) ** 2
    w = 1.0 / err ** 2 if np.all(err > 0) else np.ones_like(y)
    W = np.sum(w)
    xbar = np.sum(w * x) / W
    ybar = np.sum(w * y) / W
    sxx = np.sum(w * (x - xbar) ** 2)
    sxy = np.sum(w * (x - xbar) * (y - ybar))
    lam = sxy / sxx
    intercept = ybar - lam * xbar
    yhat = lam * x + intercept
    ss_res = np.sum(w * (y - yhat) ** 2)
    ss_tot = np.sum(w * (y - ybar) ** 2)
    r2 = 1.0 - ss_res / ss_tot if ss_tot > 0 else 1.0
    return float(lam), float(intercept), float(r2)


# --------------------------------------------------------------------------
# CSV and manifest output (UTF-8, header row, '.' decimal, 9 significant digits)
# --------------------------------------------------------------------------

def _fmt(x) -> str:
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    return f"{float(x):.9g}"


def _write_csv(path, header: list[str], rows) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(_fmt(v) if not isinstance(v, str) else v
                              for v in row) + "\n")


def write_entropy_timeseries(res: EnsembleResult, path) -> None:
    rows = zip(res.times, res.mean_S, res.stderr_S,
               res.mean_nn_pairing, res.stderr_nn_pairing)
    _write_csv(path, ["t", "mean_S", "stderr_S",
                      "mean_nn_pairing", "stderr_nn_pairing"], rows)


def _steady_row(config: TrajectoryConfig, res: EnsembleResult):
    a, b = config.effective_window
    return [config.params.L, config.params.J, config.params.delta,
            config.params.gamma, config.n_traj,
            res.s_steady, res.s_steady_err, a, b]


_STEADY_HEADER = ["L", "J", "delta", "gamma", "n_traj",
                  "s_steady", "s_steady_err", "window_start", "window_end"]


def write_steady_state(config: TrajectoryConfig, res: EnsembleResult, path) -> None:
    _write_csv(path, _STEADY_HEADER, [_steady_row(config, res)])


def write_gamma_sweep(config: TrajectoryConfig, rows, path) -> None:
    a, b = config.effective_window
    out = [[config.params.L, config.params.J, config.params.delta, r["gamma"],
            config.n_traj, r["s_steady"], r["s_steady_err"], a, b]
           for r in rows]
    _write_csv(path, _STEADY_HEADER, out)


def write_gamma_peak(peak: dict, path) -> None:
    _write_csv(path, ["delta", "L", "gamma_peak", "gamma_grid_spacing"],
               [[peak["delta"], peak["L"], peak["gamma_peak"],
                 peak["gamma_grid_spacing"]]])


def write_scaling_fit(delta, gamma, lam, intercept, r2, L_list, path) -> None:
    _write_csv(path, ["delta", "gamma", "lambda", "intercept", "r_squared", "L_list"],
               [[delta, gamma, lam, intercept, r2,
                 ";".join(str(int(x)) for x in L_list)]])


def write_manifest(path, config_map: dict, wall_time_s: float) -> None:
    from . import __version__
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for key in sorted(config_map):
            fh.write(f"{key} = {config_map[key]}\n")
        fh.write(f"code_version = monbcs {__version__}\n")
        fh.write(f"wall_time_s = {wall_time_s:.3f}\n")


def timestamp() -> float:
    return time.time()
