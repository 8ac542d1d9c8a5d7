"""Jitted inner loops: Euler-Maruyama stepping, recursive filtering, path sums.

These kernels are single-threaded and run IEEE-strict (no fastmath), so
results are bit-reproducible regardless of how many worker threads drive
them.  Basis-derivative evaluation mirrors model.grad_V exactly.
"""

import math

import numpy as np
from numba import njit


@njit(cache=True, nogil=True)
def grad_into(kind_code, dcoeffs, nbasis, x, out):
    # kind_code 0: Horner on ascending coefficient rows of V_i'
    # kind_code 1: differentiated Chebyshev recurrence, T_1'..T_n'
    if kind_code == 0:
        for i in range(nbasis):
            acc = 0.0
            for k in range(dcoeffs.shape[1] - 1, -1, -1):
                acc = acc * x + dcoeffs[i, k]
            out[i] = acc
    else:
        t_pp = 1.0
        t_p = x
        d_pp = 0.0
        d_p = 1.0
        out[0] = d_p
        for i in range(1, nbasis):
            t = 2.0 * x * t_p - t_pp
            d = 2.0 * t_p + 2.0 * x * d_p - d_pp
            out[i] = d
            t_pp = t_p
            t_p = t
            d_pp = d_p
            d_p = d


@njit(cache=True, nogil=True)
def em_path(out, noise, x0, dt, noise_scale, kind_code, dcoeffs, alpha, cos_amp, eps):
    """Euler-Maruyama recursion; returns -1 or the first non-finite step index.

    out has length len(noise) + 1; noise holds i.i.d. standard normals.
    Drift is -alpha . V'(x) plus, for the cosine fast potential,
    (cos_amp/eps) sin(x/eps).
    """
    nbasis = alpha.shape[0]
    gbuf = np.empty(nbasis)
    x = x0
    out[0] = x
    for j in range(noise.shape[0]):
        grad_into(kind_code, dcoeffs, nbasis, x, gbuf)
        s = 0.0
        for i in range(nbasis):
            s += alpha[i] * gbuf[i]
        drift = -s
        if cos_amp != 0.0:
            drift += (cos_amp / eps) * math.sin(x / eps)
        x = x + drift * dt + noise_scale * noise[j]
        if not math.isfinite(x):
            return j + 1
        out[j + 1] = x
    return -1


@njit(cache=True, nogil=True)
def beta1_filter(xv, q, w_level, w_slope):
    """Exact exponential smoother for piecewise-linear input.

    z[j+1] = q z[j] + w_level x[j] + w_slope (x[j+1] - x[j]), z[0] = 0.
    """
    z = np.zeros(xv.shape[0])
    for j in range(xv.shape[0] - 1):
        z[j + 1] = q * z[j] + w_level * xv[j] + w_slope * (xv[j + 1] - xv[j])
    return z


@njit(cache=True, nogil=True)
def truncated_convolution(w, xv):
    """z[j] = sum_{i<=j} w[j-i] x[i], the O(n^2) reference path."""
    n1 = xv.shape[0]
    z = np.zeros(n1)
    for j in range(n1):
        acc = 0.0
        for i in range(j + 1):
            acc += w[j - i] * xv[i]
        z[j] = acc
    return z


@njit(cache=True, nogil=True)
def functional_sums(xv, zv, kind_code, dcoeffs, nbasis):
    """Raw sums behind the path functionals, single pass over the grid.

    Returns (SM, Sh, SMt, Sht) with
      SM[a,b]  = sum_j V_a'(x_j) V_b'(x_j)
      Sh[a]    = sum_j V_a'(x_j) (x_{j+1} - x_j)
      SMt[a,b] = sum_j V_a'(z_j) V_b'(x_j)
      Sht[a]   = sum_j V_a'(z_j) (x_{j+1} - x_j)
    """
    SM = np.zeros((nbasis, nbasis))
    Sh = np.zeros(nbasis)
    SMt = np.zeros((nbasis, nbasis))
    Sht = np.zeros(nbasis)
    gx = np.empty(nbasis)
    gz = np.empty(nbasis)
    for j in range(xv.shape[0] - 1):
        grad_into(kind_code, dcoeffs, nbasis, xv[j], gx)
        grad_into(kind_code, dcoeffs, nbasis, zv[j], gz)
        dx = xv[j + 1] - xv[j]
        for a in range(nbasis):
            Sh[a] += gx[a] * dx
            Sht[a] += gz[a] * dx
            for b in range(nbasis):
                SM[a, b] += gx[a] * gx[b]
                SMt[a, b] += gz[a] * gx[b]
    return SM, Sh, SMt, Sht


@njit(cache=True, nogil=True)
def sq_increment_sum(xv):
    """sum_j (x_{j+1} - x_j)^2."""
    s = 0.0
    for j in range(xv.shape[0] - 1):
        d = xv[j + 1] - xv[j]
        s += d * d
    return s


@njit(cache=True, nogil=True)
def sq_gap_sum(xv, zv):
    """Left-endpoint sum_{j<n} (x_j - z_j)^2."""
    s = 0.0
    for j in range(xv.shape[0] - 1):
        d = xv[j] - zv[j]
        s += d * d
    return s
