"""Trajectory generation by Euler-Maruyama with reproducible randomness.

Noise streams come from NumPy's PCG64 generator (``np.random.default_rng``),
seeded explicitly; the experiment harness derives per-replica substreams as
``base_seed + replica``.  The integrator step equals the output step tau.
Identical (model, config) inputs give bit-identical trajectories.

Trajectories serialize to CSV (``t,x`` header, 17 significant digits) or to
a raw little-endian binary format: 8-byte magic ``MSDTRAJ1``, float64 t0,
float64 tau, uint64 n, then n+1 float64 samples.
"""

from __future__ import annotations

import math
import struct
import warnings
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import _fast
from .errors import EmptyResultError, NonFiniteError
from .model import MultiscaleModel, SlowPotential, grad_tables, multiscale_drift

_MAGIC = b"MSDTRAJ1"

RNG_ALGORITHM = "PCG64"  # numpy.random.default_rng bit generator, pinned


@dataclass(frozen=True, eq=False)
class Trajectory:
    """Uniformly sampled scalar path: values[j] observed at t0 + j*tau."""

    t0: float
    tau: float
    values: np.ndarray
    meta: dict = field(default_factory=dict, compare=False, repr=False)

    def __post_init__(self):
        v = np.ascontiguousarray(self.values, dtype=np.float64)
        if v.ndim != 1 or v.size < 2:
            raise ValueError("trajectory needs at least two samples")
        if not self.tau > 0:
            raise ValueError("sampling step tau must be positive")
        if not np.isfinite(v).all():
            raise ValueError("trajectory contains non-finite samples")
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    @property
    def n(self) -> int:
        """Number of increments (samples minus one)."""
        return self.values.size - 1

    @property
    def T(self) -> float:
        """Elapsed time n * tau."""
        return self.n * self.tau

    def times(self) -> np.ndarray:
        return self.t0 + self.tau * np.arange(self.values.size)


@dataclass(frozen=True)
class SimConfig:
    """Integration settings: final time, step, seed, start point, burn-in.

    ``burn_in`` is simulated before time zero and discarded, so the
    returned path starts near stationarity when burn_in is large enough.
    """

    T: float
    dt: float
    seed: int
    x0: float = 0.0
    burn_in: float = 0.0

    def __post_init__(self):
        if not self.dt > 0:
            raise ValueError("dt must be positive")
        if self.dt > self.T:
            raise ValueError("dt must not exceed T")
        if self.burn_in < 0:
            raise ValueError("burn_in must be nonnegative")
        if int(self.seed) < 0:
            raise ValueError("seed must be a nonnegative integer")


def _steps(duration: float, dt: float) -> int:
    return max(0, int(round(duration / dt)))


def _run_em(slow: SlowPotential, drift_coef: np.ndarray, cos_amp: float, eps: float,
            sigma_eff: float, cfg: SimConfig) -> Trajectory:
    n = _steps(cfg.T, cfg.dt)
    if n < 1:
        raise ValueError("T/dt yields no integration steps")
    n_burn = _steps(cfg.burn_in, cfg.dt)
    noise = np.random.default_rng(int(cfg.seed)).standard_normal(n_burn + n)
    out = np.empty(n_burn + n + 1)
    kind_code, dcoeffs, nbasis = grad_tables(slow)
    scale = math.sqrt(2.0 * sigma_eff * cfg.dt)
    bad = _fast.em_path(out, noise, float(cfg.x0), float(cfg.dt), scale,
                        kind_code, dcoeffs, np.asarray(drift_coef, dtype=np.float64),
                        float(cos_amp), float(eps))
    if bad >= 0:
        t_bad = (bad - n_burn) * cfg.dt
        raise NonFiniteError(
            f"state became non-finite at step {bad} (t = {t_bad:g}); "
            f"dt = {cfg.dt:g} is too large for this drift"
        )
    return Trajectory(0.0, cfg.dt, out[n_burn:].copy())


def _run_em_generic(m: MultiscaleModel, cfg: SimConfig) -> Trajectory:
    # Pure-Python fallback for fast potentials outside the cosine family.
    n = _steps(cfg.T, cfg.dt)
    if n < 1:
        raise ValueError("T/dt yields no integration steps")
    n_burn = _steps(cfg.burn_in, cfg.dt)
    noise = np.random.default_rng(int(cfg.seed)).standard_normal(n_burn + n)
    scale = math.sqrt(2.0 * m.sigma * cfg.dt)
    out = np.empty(n_burn + n + 1)
    x = float(cfg.x0)
    out[0] = x
    for j in range(n_burn + n):
        x = x + multiscale_drift(m, x) * cfg.dt + scale * noise[j]
        if not math.isfinite(x):
            raise NonFiniteError(
                f"state became non-finite at step {j + 1}; dt = {cfg.dt:g} too large"
            )
        out[j + 1] = x
    return Trajectory(0.0, cfg.dt, out[n_burn:].copy())


def simulate_multiscale(m: MultiscaleModel, cfg: SimConfig) -> Trajectory:
    """Sample the two-scale SDE dX = -alpha.V'(X)dt - p'(X/eps)/eps dt + sqrt(2 sigma) dW."""
    if cfg.dt > m.eps ** 2 / 10.0:
        warnings.warn(
            f"dt = {cfg.dt:g} exceeds eps^2/10 = {m.eps ** 2 / 10.0:g}; "
            "the fast-scale term is under-resolved",
            stacklevel=2,
        )
    if m.fast.cos_amp is None:
        return _run_em_generic(m, cfg)
    return _run_em(m.slow, m.alpha, m.fast.cos_amp, m.eps, m.sigma, cfg)


def simulate_homogenized(h, slow: SlowPotential, cfg: SimConfig) -> Trajectory:
    """Sample the effective SDE dX = -A.V'(X)dt + sqrt(2 Sigma) dW.

    ``h`` is a HomogenizedModel (anything with fields A and Sigma works).
    Shares the integrator with simulate_multiscale, so a multiscale model
    with vanishing fast potential and matching coefficients reproduces the
    same trajectory bit for bit under the same seed.
    """
    return _run_em(slow, np.atleast_1d(h.A), 0.0, 1.0, h.Sigma, cfg)


def subsample(x: Trajectory, stride: int, offset: int = 0) -> Trajectory:
    """Every stride-th sample starting at offset; tau grows accordingly."""
    stride = int(stride)
    offset = int(offset)
    if stride < 1:
        raise ValueError("stride must be a positive integer")
    if not 0 <= offset < stride:
        raise ValueError("offset must satisfy 0 <= offset < stride")
    if stride > x.n:
        raise EmptyResultError(f"stride {stride} exceeds the {x.n} available increments")
    vals = x.values[offset::stride]
    if vals.size < 2:
        raise EmptyResultError("fewer than two samples survive subsampling")
    return Trajectory(x.t0 + offset * x.tau, stride * x.tau, vals.copy())


def save_trajectory(x: Trajectory, path, fmt: str | None = None) -> None:
    """Write CSV (.csv) or raw binary (anything else, canonically .traj)."""
    path = Path(path)
    fmt = fmt or ("csv" if path.suffix.lower() == ".csv" else "binary")
    if fmt == "csv":
        t = x.times()
        with open(path, "w") as f:
            f.write("t,x\n")
            for j in range(x.values.size):
                f.write(f"{t[j]:.17g},{x.values[j]:.17g}\n")
    elif fmt == "binary":
        with open(path, "wb") as f:
            f.write(_MAGIC)
            f.write(struct.pack("<ddQ", x.t0, x.tau, x.n))
            f.write(x.values.astype("<f8").tobytes())
    else:
        raise ValueError(f"unknown trajectory format {fmt!r}")


def load_trajectory(path, fmt: str | None = None) -> Trajectory:
    """Read a trajectory written by save_trajectory."""
    path = Path(path)
    fmt = fmt or ("csv" if path.suffix.lower() == ".csv" else "binary")
    if fmt == "csv":
        data = np.loadtxt(path, delimiter=",", skiprows=1)
        if data.ndim != 2 or data.shape[0] < 2:
            raise ValueError(f"{path}: need at least two samples")
        t, v = data[:, 0], data[:, 1]
        return Trajectory(float(t[0]), float(t[1] - t[0]), v)
    with open(path, "rb") as f:
        magic = f.read(8)
        if magic != _MAGIC:
            raise ValueError(f"{path}: not a trajectory file (bad magic {magic!r})")
        t0, tau, n = struct.unpack("<ddQ", f.read(24))
        v = np.frombuffer(f.read(8 * (n + 1)), dtype="<f8")
        if v.size != n + 1:
            raise ValueError(f"{path}: truncated payload")
        return Trajectory(t0, tau, v.astype(np.float64))
