"""Causal exponential-kernel smoothing of trajectories.

The kernel family is k(r) = C_beta delta^(-1/beta) exp(-r^beta / delta)
with C_beta = beta / Gamma(1/beta), normalized so that k integrates to one
on [0, inf).  The filtered path is the truncated convolution

    z(t) = int_0^t k(t - s) x(s) ds,

so z(0) = 0 exactly and the output carries a transient of duration
O(delta); no renormalization by the partial kernel mass is applied.

For beta = 1 the convolution solves dz = (x - z)/delta dt and is advanced
by an exact exponential update assuming piecewise-linear x between
samples.  For general beta the integral is discretized by the composite
trapezoid rule on the sample grid and evaluated either directly (O(n^2))
or via FFT convolution (O(n log n)); the two agree to roundoff.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.signal import fftconvolve

from . import _fast
from .sim import Trajectory

_DIRECT_LIMIT = 512  # method="auto" switches to FFT above this many samples


@dataclass(frozen=True)
class FilterParams:
    """Kernel shape: exponent beta >= 1 and width delta > 0 (time units)."""

    beta: float
    delta: float

    def __post_init__(self):
        if not self.beta >= 1:
            raise ValueError("beta must be >= 1")
        if not self.delta > 0:
            raise ValueError("delta must be positive")


def kernel_eval(fp: FilterParams, r):
    """Kernel value(s) at lag r >= 0.

    The normalizing constant uses math.gamma (the platform Lanczos-type
    implementation, documented accurate to well under 1e-12 relative).
    """
    arr = np.asarray(r, dtype=np.float64)
    if np.any(arr < 0):
        raise ValueError("kernel lag r must be nonnegative")
    c = fp.beta / math.gamma(1.0 / fp.beta)
    out = c * fp.delta ** (-1.0 / fp.beta) * np.exp(-(arr ** fp.beta) / fp.delta)
    if np.ndim(r) == 0:
        return float(out)
    return out


def _beta1_weights(tau: float, delta: float) -> tuple[float, float, float]:
    """(q, w_level, w_slope) of the exact piecewise-linear update.

    z_{j+1} = q z_j + w_level x_j + w_slope (x_{j+1} - x_j) with u =
    tau/delta, q = exp(-u), w_level = 1 - q and w_slope = 1 - (1-q)/u.
    A series branch avoids cancellation in w_slope for tiny u.
    """
    u = tau / delta
    q = math.exp(-u)
    one_m_q = -math.expm1(-u)
    if u < 1e-5:
        w_slope = u / 2.0 - u * u / 6.0
    else:
        w_slope = 1.0 - one_m_q / u
    return q, one_m_q, w_slope


def filter_beta1(x: Trajectory, delta: float) -> Trajectory:
    """Recursive beta = 1 filter, exact for piecewise-linear input."""
    if not delta > 0:
        raise ValueError("delta must be positive")
    q, w_level, w_slope = _beta1_weights(x.tau, float(delta))
    z = _fast.beta1_filter(x.values, q, w_level, w_slope)
    return Trajectory(x.t0, x.tau, z, meta={"filter_beta": 1.0, "filter_delta": float(delta)})


def filter_convolution(x: Trajectory, fp: FilterParams, method: str = "auto") -> Trajectory:
    """General-beta filter by trapezoid discretization of the convolution.

    The full truncated kernel is kept (no tail cutoff).  method is one of
    "auto", "direct", "fft"; the two evaluation paths return identical
    results to roundoff.
    """
    if method not in ("auto", "direct", "fft"):
        raise ValueError(f"unknown convolution method {method!r}")
    xv = x.values
    kv = kernel_eval(fp, np.arange(xv.size) * x.tau)
    w = x.tau * kv
    w[0] *= 0.5
    if method == "direct" or (method == "auto" and xv.size <= _DIRECT_LIMIT):
        z = _fast.truncated_convolution(w, xv)
    else:
        z = fftconvolve(w, xv)[: xv.size]
    # trapezoid halves the oldest node too; z(0) is an empty integral
    z = z - 0.5 * x.tau * kv * xv[0]
    z[0] = 0.0
    return Trajectory(
        x.t0, x.tau, z,
        meta={"filter_beta": float(fp.beta), "filter_delta": float(fp.delta)},
    )


def apply_filter(x: Trajectory, fp: FilterParams, method: str = "auto") -> Trajectory:
    """Dispatch: exact recursion for beta = 1, trapezoid convolution otherwise."""
    if fp.beta == 1.0:
        return filter_beta1(x, fp.delta)
    return filter_convolution(x, fp, method=method)
