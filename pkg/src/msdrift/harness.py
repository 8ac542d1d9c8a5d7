"""Config-driven experiment harness with fixed seeds and flat CSV output.

Six experiments cover the behavior of the estimators at desk scale:

  zeta_sweep         filtered drift across filter widths delta = eps^zeta,
                     showing the regime switch at zeta = 2 (plus the raw
                     MLE as the no-preprocessing baseline)
  subsample_compare  filtered (beta 1 and 5) vs subsampled drift across
                     noise levels and widths
  beta_sweep         sensitivity of the filtered drift to the kernel
                     exponent at delta = eps
  variance_study     replica spread of filtered, subsampled, and
                     shift-averaged estimates on the scalar double well
  multidim           four-component Chebyshev basis: MLE vs filtered vs
                     subsampled against the homogenized truth
  bayes_bistable     posterior snapshots over time on the two-component
                     double well, with the filtered diffusion estimate

Every experiment is a pure function of its config (including base_seed):
reruns produce byte-identical CSV at any worker-thread count.  Replica r
draws its noise from seed base_seed + r; experiments that share a replica
index across grid cells reuse the same noise stream deliberately, which
pairs the cells and lets identical cells in different experiments agree
exactly.  Failures are isolated per cell: a failed cell becomes a flagged
row and never aborts the sweep.

Output is long-format CSV with one row per (cell, estimator, component),
plus a JSON metadata sidecar carrying the full config, the integrator
step, and build provenance.
"""

from __future__ import annotations

import csv
import json
import math
import subprocess
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from .bayes import GaussianPrior, ball_mass_outside, contraction_diagnostics, posterior
from .errors import ConfigError, MsdriftError
from .estimators import (
    diffusion_filtered,
    filtered_drift,
    mle_drift,
    path_functionals,
    shift_averaged_drift,
    subsampled_drift,
)
from .filters import FilterParams, apply_filter, filter_beta1
from .homogenize import homogenize
from .model import (
    MultiscaleModel,
    cosine_fast,
    dissipativity_warning,
    make_potential,
    potential_spec,
)
from .sim import SimConfig, Trajectory, simulate_multiscale

EXPERIMENTS = (
    "zeta_sweep",
    "subsample_compare",
    "beta_sweep",
    "variance_study",
    "multidim",
    "bayes_bistable",
)

COLUMNS = (
    "experiment", "potential", "eps", "sigma", "T", "zeta", "beta", "delta",
    "stride", "replica", "estimator", "component", "value", "failed",
)


@dataclass
class ExperimentConfig:
    """Full description of one experiment run; see default_config."""

    experiment: str
    potential: dict
    alpha: tuple
    sigma: float
    eps: float
    T: float
    grid: dict
    replicas: int
    base_seed: int
    p_amp: float = 1.0
    dt: float | None = None
    burn_in: float = 50.0
    x0: float = 0.0
    threads: int = 1
    out: str | None = None

    @property
    def dt_used(self) -> float:
        """Integrator step; defaults to eps^3 so that dt << eps^2."""
        return self.dt if self.dt is not None else self.eps ** 3

    def validate(self) -> None:
        if self.experiment not in EXPERIMENTS:
            raise ConfigError(f"unknown experiment {self.experiment!r}; "
                              f"choose one of {', '.join(EXPERIMENTS)}")
        if self.replicas < 1:
            raise ConfigError("replicas must be >= 1")
        if not self.T > 0 or not self.eps > 0:
            raise ConfigError("T and eps must be positive")
        if self.dt is not None and not 0 < self.dt <= self.T:
            raise ConfigError("dt must lie in (0, T]")
        for key, vals in self.grid.items():
            if isinstance(vals, (list, tuple)) and len(vals) == 0:
                raise ConfigError(f"grid entry {key!r} is empty")


@dataclass
class ExperimentResult:
    experiment: str
    records: list
    metadata: dict

    @property
    def n_failed(self) -> int:
        return sum(r["failed"] for r in self.records)


def default_config(experiment: str, full: bool = False) -> ExperimentConfig:
    """Built-in parameter set for each experiment.

    Desk-scale defaults run in minutes; full=True restores the large
    replica counts where the two differ.
    """
    common = dict(base_seed=0, dt=None, burn_in=50.0, x0=0.0, threads=1, out=None)
    if experiment == "zeta_sweep":
        return ExperimentConfig(
            experiment=experiment, potential={"kind": "quadratic"}, alpha=(1.0,),
            sigma=1.0, eps=0.1, T=1000.0,
            grid={"zetas": [i / 10 for i in range(31)]},
            replicas=8, **common)
    if experiment == "subsample_compare":
        return ExperimentConfig(
            experiment=experiment, potential={"kind": "quadratic"}, alpha=(1.0,),
            sigma=1.0, eps=0.1, T=1000.0,
            grid={"sigmas": [0.5, 0.7, 1.0], "zetas": [i / 10 for i in range(11)],
                  "betas": [1.0, 5.0]},
            replicas=4, **common)
    if experiment == "beta_sweep":
        return ExperimentConfig(
            experiment=experiment, potential={"kind": "quadratic"}, alpha=(1.0,),
            sigma=1.0, eps=0.1, T=1000.0,
            grid={"sigmas": [0.5, 0.7, 1.0], "betas": [float(b) for b in range(1, 11)]},
            replicas=4, **common)
    if experiment == "variance_study":
        return ExperimentConfig(
            experiment=experiment, potential={"kind": "bistable_scalar"}, alpha=(1.0,),
            sigma=1.0, eps=0.1, T=500.0,
            grid={"betas": [1.0, 5.0], "filter_delta": 1.0, "subsample_zeta": 2.0 / 3.0},
            replicas=500 if full else 100, **common)
    if experiment == "multidim":
        return ExperimentConfig(
            experiment=experiment, potential={"kind": "chebyshev", "n": 4},
            alpha=(-1.0, -0.5, 0.5, 1.0), sigma=1.0, eps=0.05, T=1000.0,
            grid={"filter_beta": 1.0, "filter_delta": 1.0, "subsample_zeta": 2.0 / 3.0},
            replicas=4, **common)
    if experiment == "bayes_bistable":
        return ExperimentConfig(
            experiment=experiment, potential={"kind": "bistable"}, alpha=(1.0, 2.0),
            sigma=0.7, eps=0.05, T=400.0,
            grid={"T_list": [100.0, 200.0, 400.0], "beta": 1.0,
                  "prior_scale": 1.0, "ball_radius": 0.5},
            replicas=8, **common)
    raise ConfigError(f"unknown experiment {experiment!r}; choose one of {', '.join(EXPERIMENTS)}")


def config_from_dict(data: dict, full: bool = False) -> ExperimentConfig:
    """Merge a (possibly partial) config dict over the experiment defaults."""
    if not isinstance(data, dict) or "experiment" not in data:
        raise ConfigError("config must be an object with an 'experiment' key")
    cfg = default_config(str(data["experiment"]), full=full)
    known = set(asdict(cfg))
    for key, val in data.items():
        if key == "experiment":
            continue
        if key not in known:
            raise ConfigError(f"unknown config key {key!r}")
        if key == "grid":
            if not isinstance(val, dict):
                raise ConfigError("grid must be an object")
            cfg.grid = {**cfg.grid, **val}
        elif key == "alpha":
            cfg.alpha = tuple(float(a) for a in val)
        else:
            setattr(cfg, key, val)
    cfg.validate()
    return cfg


def load_config(path, full: bool = False) -> ExperimentConfig:
    try:
        with open(path) as f:
            data = json.load(f)
    except (OSError, json.JSONDecodeError) as e:
        raise ConfigError(f"cannot read config {path}: {e}") from e
    return config_from_dict(data, full=full)


# ---------------------------------------------------------------------------
# shared machinery


def _potential_name(spec: dict) -> str:
    kind = spec["kind"]
    if kind == "chebyshev":
        return f"chebyshev:{spec['n']}"
    return kind


def _model(cfg: ExperimentConfig, sigma: float) -> MultiscaleModel:
    slow = make_potential(cfg.potential)
    msg = dissipativity_warning(slow, cfg.alpha)
    if msg:
        warnings.warn(msg, stacklevel=3)
    return MultiscaleModel(slow, cosine_fast(cfg.p_amp), np.asarray(cfg.alpha), sigma, cfg.eps)


def _simulate(cfg: ExperimentConfig, model: MultiscaleModel, replica: int) -> Trajectory:
    sim = SimConfig(T=cfg.T, dt=cfg.dt_used, seed=cfg.base_seed + replica,
                    x0=cfg.x0, burn_in=cfg.burn_in)
    return simulate_multiscale(model, sim)


def _stride_for(delta: float, tau: float) -> int:
    """Quantize a subsampling width to the grid: stride = max(1, round(delta/tau))."""
    return max(1, int(round(delta / tau)))


def _rec(cfg: ExperimentConfig, estimator: str, *, sigma=None, T=None, zeta=None,
         beta=None, delta=None, stride=None, replica=None, component=None,
         value=None, failed=False) -> dict:
    return {
        "experiment": cfg.experiment,
        "potential": _potential_name(cfg.potential),
        "eps": cfg.eps,
        "sigma": cfg.sigma if sigma is None else sigma,
        "T": cfg.T if T is None else T,
        "zeta": zeta,
        "beta": beta,
        "delta": delta,
        "stride": stride,
        "replica": replica,
        "estimator": estimator,
        "component": component,
        "value": value,
        "failed": int(failed),
    }


def _value_rows(cfg, estimator, vec, **kw) -> list:
    vec = np.atleast_1d(vec)
    return [_rec(cfg, estimator, component=i, value=float(vec[i]), **kw)
            for i in range(vec.size)]


def _failed_row(cfg, estimator, **kw) -> dict:
    return _rec(cfg, estimator, failed=True, **kw)


def _map_tasks(tasks, fn, threads: int) -> list:
    if threads <= 1:
        chunks = [fn(t) for t in tasks]
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            chunks = list(pool.map(fn, tasks))
    return [rec for chunk in chunks for rec in chunk]


def _sort_key(rec: dict):
    key = []
    for col in COLUMNS[:-2]:  # everything before value/failed identifies the row
        v = rec[col]
        key.append((0, "") if v is None else (1, v))
    return tuple(key)


# ---------------------------------------------------------------------------
# experiments


def run_zeta_sweep(cfg: ExperimentConfig) -> ExperimentResult:
    """Filtered drift across delta = eps^zeta, plus the raw MLE baseline."""
    model = _model(cfg, cfg.sigma)
    zetas = [float(z) for z in cfg.grid["zetas"]]

    def work(replica: int) -> list:
        recs = []
        try:
            x = _simulate(cfg, model, replica)
        except MsdriftError:
            recs.append(_failed_row(cfg, "mle", replica=replica))
            for zeta in zetas:
                recs.append(_failed_row(cfg, "filtered", replica=replica, zeta=zeta,
                                        beta=1.0, delta=cfg.eps ** zeta))
            return recs
        pf_plain = path_functionals(x, None, model.slow)
        try:
            recs += _value_rows(cfg, "mle", mle_drift(pf_plain).value, replica=replica)
        except MsdriftError:
            recs.append(_failed_row(cfg, "mle", replica=replica))
        for zeta in zetas:
            delta = cfg.eps ** zeta
            try:
                z = filter_beta1(x, delta)
                est = filtered_drift(path_functionals(x, z, model.slow))
                recs += _value_rows(cfg, "filtered", est.value, replica=replica,
                                    zeta=zeta, beta=1.0, delta=delta)
            except MsdriftError:
                recs.append(_failed_row(cfg, "filtered", replica=replica, zeta=zeta,
                                        beta=1.0, delta=delta))
        return recs

    records = _map_tasks(range(cfg.replicas), work, cfg.threads)
    return _finish(cfg, records)


def run_subsample_compare(cfg: ExperimentConfig) -> ExperimentResult:
    """Subsampled vs filtered drift across sigma and delta = eps^zeta."""
    slow = make_potential(cfg.potential)
    sigmas = [float(s) for s in cfg.grid.get("sigmas", [cfg.sigma])]
    zetas = [float(z) for z in cfg.grid["zetas"]]
    betas = [float(b) for b in cfg.grid["betas"]]

    def work(key) -> list:
        sigma, replica = key
        recs = []
        model = _model(cfg, sigma)
        try:
            x = _simulate(cfg, model, replica)
        except MsdriftError:
            for zeta in zetas:
                recs.append(_failed_row(cfg, "subsampled", sigma=sigma, replica=replica,
                                        zeta=zeta))
                for beta in betas:
                    recs.append(_failed_row(cfg, "filtered", sigma=sigma, replica=replica,
                                            zeta=zeta, beta=beta, delta=cfg.eps ** zeta))
            return recs
        for zeta in zetas:
            delta = cfg.eps ** zeta
            stride = _stride_for(delta, x.tau)
            try:
                est = subsampled_drift(x, slow, stride)
                recs += _value_rows(cfg, "subsampled", est.value, sigma=sigma,
                                    replica=replica, zeta=zeta,
                                    delta=stride * x.tau, stride=stride)
            except MsdriftError:
                recs.append(_failed_row(cfg, "subsampled", sigma=sigma, replica=replica,
                                        zeta=zeta, stride=stride))
            for beta in betas:
                try:
                    z = apply_filter(x, FilterParams(beta, delta))
                    est = filtered_drift(path_functionals(x, z, slow))
                    recs += _value_rows(cfg, "filtered", est.value, sigma=sigma,
                                        replica=replica, zeta=zeta, beta=beta, delta=delta)
                except MsdriftError:
                    recs.append(_failed_row(cfg, "filtered", sigma=sigma, replica=replica,
                                            zeta=zeta, beta=beta, delta=delta))
        return recs

    tasks = [(s, r) for s in sigmas for r in range(cfg.replicas)]
    records = _map_tasks(tasks, work, cfg.threads)
    return _finish(cfg, records)


def run_beta_sweep(cfg: ExperimentConfig) -> ExperimentResult:
    """Filtered drift for beta = 1..10 at fixed delta = eps."""
    slow = make_potential(cfg.potential)
    sigmas = [float(s) for s in cfg.grid.get("sigmas", [cfg.sigma])]
    betas = [float(b) for b in cfg.grid["betas"]]
    delta = cfg.eps

    def work(key) -> list:
        sigma, replica = key
        recs = []
        model = _model(cfg, sigma)
        try:
            x = _simulate(cfg, model, replica)
        except MsdriftError:
            return [_failed_row(cfg, "filtered", sigma=sigma, replica=replica,
                                beta=beta, delta=delta) for beta in betas]
        for beta in betas:
            try:
                z = apply_filter(x, FilterParams(beta, delta))
                est = filtered_drift(path_functionals(x, z, slow))
                recs += _value_rows(cfg, "filtered", est.value, sigma=sigma,
                                    replica=replica, zeta=1.0, beta=beta, delta=delta)
            except MsdriftError:
                recs.append(_failed_row(cfg, "filtered", sigma=sigma, replica=replica,
                                        zeta=1.0, beta=beta, delta=delta))
        return recs

    tasks = [(s, r) for s in sigmas for r in range(cfg.replicas)]
    records = _map_tasks(tasks, work, cfg.threads)
    return _finish(cfg, records)


def run_variance_study(cfg: ExperimentConfig) -> ExperimentResult:
    """Replica spread of filtered, subsampled, and shift-averaged estimates."""
    model = _model(cfg, cfg.sigma)
    betas = [float(b) for b in cfg.grid["betas"]]
    fdelta = float(cfg.grid["filter_delta"])
    szeta = float(cfg.grid["subsample_zeta"])

    def work(replica: int) -> list:
        recs = []
        try:
            x = _simulate(cfg, model, replica)
        except MsdriftError:
            recs = [_failed_row(cfg, "filtered", replica=replica, beta=beta, delta=fdelta)
                    for beta in betas]
            recs.append(_failed_row(cfg, "subsampled", replica=replica))
            recs.append(_failed_row(cfg, "shift_averaged", replica=replica))
            return recs
        for beta in betas:
            try:
                z = apply_filter(x, FilterParams(beta, fdelta))
                est = filtered_drift(path_functionals(x, z, model.slow))
                recs += _value_rows(cfg, "filtered", est.value, replica=replica,
                                    beta=beta, delta=fdelta)
            except MsdriftError:
                recs.append(_failed_row(cfg, "filtered", replica=replica, beta=beta,
                                        delta=fdelta))
        stride = _stride_for(cfg.eps ** szeta, x.tau)
        try:
            est = subsampled_drift(x, model.slow, stride)
            recs += _value_rows(cfg, "subsampled", est.value, replica=replica,
                                zeta=szeta, delta=stride * x.tau, stride=stride)
        except MsdriftError:
            recs.append(_failed_row(cfg, "subsampled", replica=replica, zeta=szeta,
                                    stride=stride))
        try:
            est = shift_averaged_drift(x, model.slow, stride)
            recs += _value_rows(cfg, "shift_averaged", est.value, replica=replica,
                                zeta=szeta, delta=stride * x.tau, stride=stride)
        except MsdriftError:
            recs.append(_failed_row(cfg, "shift_averaged", replica=replica, zeta=szeta,
                                    stride=stride))
        return recs

    records = _map_tasks(range(cfg.replicas), work, cfg.threads)
    return _finish(cfg, records)


def run_multidim(cfg: ExperimentConfig) -> ExperimentResult:
    """MLE vs filtered vs subsampled on the Chebyshev basis, with the truth."""
    model = _model(cfg, cfg.sigma)
    beta = float(cfg.grid["filter_beta"])
    fdelta = float(cfg.grid["filter_delta"])
    szeta = float(cfg.grid["subsample_zeta"])
    truth = homogenize(model)

    def work(replica: int) -> list:
        recs = []
        try:
            x = _simulate(cfg, model, replica)
        except MsdriftError:
            return [_failed_row(cfg, est, replica=replica)
                    for est in ("mle", "filtered", "subsampled")]
        pf = path_functionals(x, None, model.slow)
        try:
            recs += _value_rows(cfg, "mle", mle_drift(pf).value, replica=replica)
        except MsdriftError:
            recs.append(_failed_row(cfg, "mle", replica=replica))
        try:
            z = apply_filter(x, FilterParams(beta, fdelta))
            est = filtered_drift(path_functionals(x, z, model.slow))
            recs += _value_rows(cfg, "filtered", est.value, replica=replica,
                                beta=beta, delta=fdelta)
        except MsdriftError:
            recs.append(_failed_row(cfg, "filtered", replica=replica, beta=beta,
                                    delta=fdelta))
        stride = _stride_for(cfg.eps ** szeta, x.tau)
        try:
            est = subsampled_drift(x, model.slow, stride)
            recs += _value_rows(cfg, "subsampled", est.value, replica=replica,
                                zeta=szeta, delta=stride * x.tau, stride=stride)
        except MsdriftError:
            recs.append(_failed_row(cfg, "subsampled", replica=replica, zeta=szeta,
                                    stride=stride))
        return recs

    records = _map_tasks(range(cfg.replicas), work, cfg.threads)
    records += _value_rows(cfg, "truth", truth.A)
    return _finish(cfg, records)


def run_bayes_bistable(cfg: ExperimentConfig) -> ExperimentResult:
    """Posterior snapshots over time with the filtered likelihood."""
    model = _model(cfg, cfg.sigma)
    T_list = sorted(float(t) for t in cfg.grid["T_list"])
    delta = cfg.eps
    radius = float(cfg.grid["ball_radius"])
    n = model.slow.n
    prior = GaussianPrior(np.zeros(n), float(cfg.grid["prior_scale"]) * np.eye(n))
    truth = homogenize(model)

    def work(replica: int) -> list:
        recs = []
        try:
            x = _simulate(cfg, model, replica)
        except MsdriftError:
            return [_failed_row(cfg, est, replica=replica, T=T, beta=1.0, delta=delta)
                    for T in T_list
                    for est in ("posterior_mean", "trace_cov", "mean_dist_to_estimate",
                                "sigma_filtered", "ball_mass_outside")]
        z = filter_beta1(x, delta)
        for ti, T in enumerate(T_list):
            n_t = int(round(T / x.tau))
            xs = Trajectory(x.t0, x.tau, x.values[: n_t + 1])
            zs = Trajectory(z.t0, z.tau, z.values[: n_t + 1], meta=dict(z.meta))
            kw = dict(replica=replica, T=T, beta=1.0, delta=delta)
            try:
                pf = path_functionals(xs, zs, model.slow)
                post = posterior(prior, pf, truth.Sigma, kind="filtered")
                diag = contraction_diagnostics(post, pf, truth.Sigma)
                recs += _value_rows(cfg, "posterior_mean", post.mean, **kw)
                recs.append(_rec(cfg, "trace_cov", component=0,
                                 value=diag["trace_cov"], **kw))
                recs.append(_rec(cfg, "mean_dist_to_estimate", component=0,
                                 value=diag["mean_distance"], **kw))
                mass = ball_mass_outside(post, truth.A, radius,
                                         seed=cfg.base_seed + 7919 * replica + ti)
                recs.append(_rec(cfg, "ball_mass_outside", component=0, value=mass, **kw))
            except MsdriftError:
                for est in ("posterior_mean", "trace_cov", "mean_dist_to_estimate",
                            "ball_mass_outside"):
                    recs.append(_failed_row(cfg, est, **kw))
            try:
                sig = diffusion_filtered(xs, zs, delta)
                recs.append(_rec(cfg, "sigma_filtered", component=0, value=sig.value, **kw))
            except MsdriftError:
                recs.append(_failed_row(cfg, "sigma_filtered", **kw))
        return recs

    records = _map_tasks(range(cfg.replicas), work, cfg.threads)
    records += _value_rows(cfg, "truth", truth.A)
    records.append(_rec(cfg, "sigma_truth", component=0, value=truth.Sigma))
    return _finish(cfg, records)


_RUNNERS = {
    "zeta_sweep": run_zeta_sweep,
    "subsample_compare": run_subsample_compare,
    "beta_sweep": run_beta_sweep,
    "variance_study": run_variance_study,
    "multidim": run_multidim,
    "bayes_bistable": run_bayes_bistable,
}


def run_experiment(cfg: ExperimentConfig) -> ExperimentResult:
    cfg.validate()
    return _RUNNERS[cfg.experiment](cfg)


# ---------------------------------------------------------------------------
# assembly and output


def _build_info() -> dict:
    from . import __version__
    try:
        proc = subprocess.run(
            ["git", "describe", "--always", "--dirty"],
            cwd=Path(__file__).resolve().parent, capture_output=True, text=True, timeout=10,
        )
        git = proc.stdout.strip() if proc.returncode == 0 and proc.stdout.strip() else "unknown"
    except Exception:
        git = "unknown"
    return {"package": "msdrift", "version": __version__, "git": git}


def _finish(cfg: ExperimentConfig, records: list) -> ExperimentResult:
    records.sort(key=_sort_key)
    echo = asdict(cfg)
    # execution-only knobs must not leak into the provenance record
    echo.pop("threads", None)
    echo.pop("out", None)
    echo["potential"] = potential_spec(make_potential(cfg.potential))
    metadata = {
        "experiment": cfg.experiment,
        "config": echo,
        "dt": cfg.dt_used,
        "burn_in": cfg.burn_in,
        "base_seed": cfg.base_seed,
        "rng": "PCG64, replica r seeded with base_seed + r",
        "build": _build_info(),
        "columns": list(COLUMNS),
    }
    return ExperimentResult(cfg.experiment, records, metadata)


def _format_cell(v) -> str:
    if v is None:
        return ""
    if isinstance(v, float):
        return repr(v)
    return str(v)


def emit(result: ExperimentResult, out_dir, formats=("csv", "json")) -> dict:
    """Write <experiment>.csv and <experiment>.meta.json under out_dir.

    Output is byte-stable: records are pre-sorted, floats use shortest
    round-trip formatting, and the metadata carries no timestamps.
    """
    out_dir = Path(out_dir)
    paths = {}
    try:
        out_dir.mkdir(parents=True, exist_ok=True)
        if "csv" in formats:
            csv_path = out_dir / f"{result.experiment}.csv"
            with open(csv_path, "w", newline="") as f:
                writer = csv.writer(f, lineterminator="\n")
                writer.writerow(COLUMNS)
                for rec in result.records:
                    writer.writerow([_format_cell(rec[c]) for c in COLUMNS])
            paths["csv"] = csv_path
        if "json" in formats:
            meta_path = out_dir / f"{result.experiment}.meta.json"
            meta = dict(result.metadata)
            meta["n_records"] = len(result.records)
            meta["n_failed"] = result.n_failed
            with open(meta_path, "w") as f:
                json.dump(meta, f, indent=2, sort_keys=True)
                f.write("\n")
            paths["json"] = meta_path
    except OSError as e:
        raise OSError(f"cannot write experiment output under {out_dir}: {e}") from e
    return paths


def replica_matrix(result: ExperimentResult, estimator: str, **filters) -> np.ndarray:
    """Stack successful replica values as (replicas, components).

    Keyword filters match record fields exactly (e.g. zeta=1.0, beta=5.0).
    Convenience for tests and notebooks.
    """
    rows = {}
    for rec in result.records:
        if rec["estimator"] != estimator or rec["failed"] or rec["replica"] is None:
            continue
        if any(rec.get(k) != v for k, v in filters.items()):
            continue
        rows.setdefault(rec["replica"], {})[rec["component"]] = rec["value"]
    if not rows:
        return np.empty((0, 0))
    n_comp = max(max(comps) for comps in rows.values()) + 1
    out = np.full((len(rows), n_comp), np.nan)
    for i, rep in enumerate(sorted(rows)):
        for c, v in rows[rep].items():
            out[i, c] = v
    return out
