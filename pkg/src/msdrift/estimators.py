"""Drift and diffusion estimators as discretized path functionals.

All estimators reduce to the Gram matrix / Ito-sum pair built from a
sampled path x (and optionally its filtered companion z on the same grid):

    M      = (tau/T) sum_j V'(x_j) (x) V'(x_j)         (Gram, symmetric PSD)
    h      = (1/T)   sum_j V'(x_j) (x_{j+1} - x_j)     (Ito sum)
    Mtilde = (tau/T) sum_j V'(z_j) (x) V'(x_j)
    htilde = (1/T)   sum_j V'(z_j) (x_{j+1} - x_j)

Sums run over left endpoints j = 0..n-1 with the forward increment of x;
keeping dx (never dz) in the Ito sums is what makes the filtered
estimator converge to the homogenized drift, so no other quadrature of
the stochastic integral is offered.  Mtilde is used as-is: symmetrizing
it would change the estimator.

Estimators:
  mle_drift               -M^-1 h          (biased toward the unhomogenized drift)
  filtered_drift          -Mtilde^-1 htilde
  bayes_compatible_drift  -M^-1 htilde     (mean of the modified posterior)
  subsampled_drift        MLE on every stride-th sample
  shift_averaged_drift    mean of subsampled estimates over all offsets
  diffusion_quadratic_variation   sum dx^2 / (2T)
  diffusion_filtered              (1/(delta T)) sum tau (x_j - z_j)^2

Linear solves use dense LAPACK factorizations; lambda_min(M) is reported
with every estimate and a SingularGramError is raised (never a silent
regularization) when the data fails to excite the basis.  Supported basis
sizes are small (N <= 8).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import _fast
from .errors import GridMismatchError, SingularGramError
from .model import SlowPotential, grad_tables
from .sim import Trajectory, subsample

LAMBDA_MIN_TOL = 1e-10   # absolute cutoff on lambda_min(M)
CONDITION_CAP = 1e12     # cap on cond(Mtilde) for the filtered estimator


@dataclass(frozen=True, eq=False)
class PathFunctionals:
    """Gram/Ito functionals of one path (and optional filtered companion)."""

    M: np.ndarray
    h: np.ndarray
    Mtilde: np.ndarray
    htilde: np.ndarray
    T: float
    tau: float
    lambda_min: float

    @property
    def n_basis(self) -> int:
        return self.h.size


@dataclass(frozen=True, eq=False)
class DriftEstimate:
    value: np.ndarray
    kind: str
    diagnostics: dict = field(default_factory=dict)


@dataclass(frozen=True, eq=False)
class DiffusionEstimate:
    value: float
    kind: str
    diagnostics: dict = field(default_factory=dict)


def path_functionals(x: Trajectory, z: Trajectory | None,
                     slow: SlowPotential) -> PathFunctionals:
    """Left-endpoint Riemann/Ito sums over the sampling grid.

    With z absent the tilde functionals coincide with the plain ones.
    """
    if z is not None:
        if (z.values.size != x.values.size or z.tau != x.tau or z.t0 != x.t0):
            raise GridMismatchError(
                f"grids differ: x has (t0={x.t0}, tau={x.tau}, len={x.values.size}), "
                f"z has (t0={z.t0}, tau={z.tau}, len={z.values.size})"
            )
        zv = z.values
    else:
        zv = x.values
    kind_code, dcoeffs, nbasis = grad_tables(slow)
    SM, Sh, SMt, Sht = _fast.functional_sums(x.values, zv, kind_code, dcoeffs, nbasis)
    T = x.T
    scale = x.tau / T
    M = SM * scale
    lam = float(np.linalg.eigvalsh(M)[0])
    return PathFunctionals(
        M=M, h=Sh / T, Mtilde=SMt * scale, htilde=Sht / T,
        T=T, tau=x.tau, lambda_min=lam,
    )


def _base_diag(pf: PathFunctionals) -> dict:
    return {"lambda_min": pf.lambda_min, "T": pf.T, "tau": pf.tau}


def _check_gram(pf: PathFunctionals) -> None:
    if not pf.lambda_min > LAMBDA_MIN_TOL:
        raise SingularGramError(
            f"lambda_min(M) = {pf.lambda_min:.3e} <= {LAMBDA_MIN_TOL:g}: "
            "the path does not excite the potential basis"
        )


def mle_drift(pf: PathFunctionals) -> DriftEstimate:
    """Maximum likelihood drift -M^-1 h (Girsanov likelihood minimizer)."""
    _check_gram(pf)
    value = np.linalg.solve(pf.M, -pf.h)
    return DriftEstimate(value, "mle", _base_diag(pf))


def filtered_drift(pf: PathFunctionals) -> DriftEstimate:
    """Filtered-data drift -Mtilde^-1 htilde."""
    cond = float(np.linalg.cond(pf.Mtilde))
    if not np.isfinite(cond) or cond > CONDITION_CAP:
        raise SingularGramError(f"cond(Mtilde) = {cond:.3e} exceeds {CONDITION_CAP:g}")
    value = np.linalg.solve(pf.Mtilde, -pf.htilde)
    diag = _base_diag(pf)
    diag["cond_mtilde"] = cond
    return DriftEstimate(value, "filtered", diag)


def bayes_compatible_drift(pf: PathFunctionals) -> DriftEstimate:
    """-M^-1 htilde: the point estimate the modified posterior contracts to."""
    _check_gram(pf)
    value = np.linalg.solve(pf.M, -pf.htilde)
    return DriftEstimate(value, "bayes_compatible", _base_diag(pf))


def subsampled_drift(x: Trajectory, slow: SlowPotential, stride: int,
                     offset: int = 0) -> DriftEstimate:
    """MLE on the subsampled grid (effective step delta = stride * tau).

    For several basis functions this is the Gram/Ito generalization of
    the scalar subsampled estimator; the scalar case reduces to
    -sum V'(x_j)(x_{j+1}-x_j) / (delta sum V'(x_j)^2) on the coarse grid.
    """
    xs = subsample(x, stride, offset)
    pf = path_functionals(xs, None, slow)
    _check_gram(pf)
    value = np.linalg.solve(pf.M, -pf.h)
    diag = _base_diag(pf)
    diag.update({"stride": int(stride), "offset": int(offset),
                 "delta_used": stride * x.tau})
    return DriftEstimate(value, "subsampled", diag)


def shift_averaged_drift(x: Trajectory, slow: SlowPotential, stride: int) -> DriftEstimate:
    """Arithmetic mean of the subsampled estimator over all grid offsets."""
    stride = int(stride)
    parts = [subsampled_drift(x, slow, stride, offset=k).value for k in range(stride)]
    value = np.mean(np.stack(parts), axis=0)
    return DriftEstimate(value, "shift_averaged", {
        "stride": stride, "n_offsets": stride, "delta_used": stride * x.tau,
        "T": x.T, "tau": x.tau,
    })


def diffusion_quadratic_variation(x: Trajectory) -> DiffusionEstimate:
    """Quadratic variation over 2T; tracks the fine-scale diffusion."""
    value = float(_fast.sq_increment_sum(x.values)) / (2.0 * x.T)
    return DiffusionEstimate(value, "quadratic_variation", {"T": x.T, "tau": x.tau})


def diffusion_filtered(x: Trajectory, z: Trajectory, delta: float) -> DiffusionEstimate:
    """(1/(delta T)) int (x - z)^2 dt by the left-endpoint rule.

    ``z`` must be the beta = 1 filter of x with this delta; when z carries
    filter metadata this is enforced, otherwise the caller is trusted.
    """
    if not delta > 0:
        raise ValueError("delta must be positive")
    if z.values.size != x.values.size or z.tau != x.tau or z.t0 != x.t0:
        raise GridMismatchError("x and z are not on the same grid")
    if z.meta:
        beta = z.meta.get("filter_beta")
        dmeta = z.meta.get("filter_delta")
        if beta is not None and beta != 1.0:
            raise ValueError(f"z was filtered with beta = {beta}, need beta = 1")
        if dmeta is not None and dmeta != float(delta):
            raise ValueError(f"z was filtered with delta = {dmeta}, not {delta}")
    value = x.tau * float(_fast.sq_gap_sum(x.values, z.values)) / (float(delta) * x.T)
    return DiffusionEstimate(value, "filtered", {"delta": float(delta), "T": x.T, "tau": x.tau})
