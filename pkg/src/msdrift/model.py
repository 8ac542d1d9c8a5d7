"""Parametric potentials for two-scale overdamped Langevin models.

The slow confining potential is a linear combination ``alpha . V(x)`` of N
scalar basis functions; the fast potential is a smooth L-periodic function
``p`` superimposed at scale ``eps``.  Built-in slow bases are a quadratic
well, the two-component bistable basis (x^4/4, -x^2/2), Chebyshev
polynomials of the first kind T_1..T_N, and arbitrary monomial-coefficient
polynomials.  All basis functions have analytic derivatives up to third
order.

Chebyshev bases are evaluated by the three-term recurrence (and its
differentiated forms), which is valid for all real x, not only [-1, 1].
Polynomial bases use Horner evaluation on ascending coefficient rows.  The
simulation kernels in ``_fast`` mirror these evaluation orders exactly so
that Python-side drift values and jitted trajectories agree bitwise.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from numpy.polynomial import polynomial as npoly

KIND_QUADRATIC = "quadratic"
KIND_BISTABLE = "bistable"
KIND_CHEBYSHEV = "chebyshev"
KIND_POLYNOMIAL = "polynomial"

# codes used by the jitted kernels in _fast
_CODE_POLY = 0
_CODE_CHEB = 1


@dataclass(frozen=True, eq=False)
class SlowPotential:
    """Basis of N scalar potential functions V_1..V_N.

    ``coeffs`` holds one row of ascending monomial coefficients per basis
    function for polynomial-backed kinds and is None for the Chebyshev
    kind, where ``n`` is the highest polynomial index T_n.
    """

    kind: str
    n: int
    coeffs: np.ndarray | None = None

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("potential needs at least one basis function")
        if self.kind == KIND_CHEBYSHEV:
            if self.coeffs is not None:
                raise ValueError("chebyshev basis carries no coefficient rows")
        else:
            rows = np.atleast_2d(np.asarray(self.coeffs, dtype=np.float64))
            if rows.shape[0] != self.n:
                raise ValueError("coefficient rows do not match basis size")
            object.__setattr__(self, "coeffs", rows)


def quadratic() -> SlowPotential:
    """Single-well basis V_1(x) = x^2 / 2."""
    return SlowPotential(KIND_QUADRATIC, 1, np.array([[0.0, 0.0, 0.5]]))


def bistable() -> SlowPotential:
    """Two-component bistable basis (x^4/4, -x^2/2)."""
    return SlowPotential(
        KIND_BISTABLE, 2, np.array([[0.0, 0.0, 0.0, 0.0, 0.25], [0.0, 0.0, -0.5, 0.0, 0.0]])
    )


def bistable_scalar() -> SlowPotential:
    """Combined double well x^4/4 - x^2/2 as a single basis function."""
    return SlowPotential(KIND_POLYNOMIAL, 1, np.array([[0.0, 0.0, -0.5, 0.0, 0.25]]))


def chebyshev(n: int) -> SlowPotential:
    """Chebyshev basis T_1..T_n, evaluated by the three-term recurrence."""
    return SlowPotential(KIND_CHEBYSHEV, int(n))


def polynomial(rows) -> SlowPotential:
    """Polynomial basis from ascending monomial coefficient rows."""
    rows = np.atleast_2d(np.asarray(rows, dtype=np.float64))
    return SlowPotential(KIND_POLYNOMIAL, rows.shape[0], rows)


def make_potential(spec) -> SlowPotential:
    """Build a potential from a config dict or a compact string.

    Accepted forms: ``"quadratic"``, ``"bistable"``, ``"bistable_scalar"``,
    ``"chebyshev:4"``, ``"polynomial:0,0,0.5;0,-1"`` (rows ';'-separated),
    or dicts ``{"kind": ..., "n": ...}`` / ``{"kind": ..., "coeffs": ...}``.
    """
    if isinstance(spec, SlowPotential):
        return spec
    if isinstance(spec, dict):
        kind = spec.get("kind")
        if kind == KIND_QUADRATIC:
            return quadratic()
        if kind == KIND_BISTABLE:
            return bistable()
        if kind == "bistable_scalar":
            return bistable_scalar()
        if kind == KIND_CHEBYSHEV:
            return chebyshev(int(spec["n"]))
        if kind == KIND_POLYNOMIAL:
            return polynomial(spec["coeffs"])
        raise ValueError(f"unknown potential kind {kind!r}")
    if isinstance(spec, str):
        name, _, arg = spec.partition(":")
        if name == KIND_QUADRATIC:
            return quadratic()
        if name == KIND_BISTABLE:
            return bistable()
        if name == "bistable_scalar":
            return bistable_scalar()
        if name == KIND_CHEBYSHEV:
            return chebyshev(int(arg))
        if name == KIND_POLYNOMIAL:
            rows = [[float(c) for c in row.split(",")] for row in arg.split(";")]
            width = max(len(r) for r in rows)
            rows = [r + [0.0] * (width - len(r)) for r in rows]
            return polynomial(rows)
        raise ValueError(f"unknown potential spec {spec!r}")
    raise TypeError("potential spec must be a string, dict, or SlowPotential")


def potential_spec(slow: SlowPotential) -> dict:
    """Config-dict form of a potential (inverse of make_potential)."""
    if slow.kind == KIND_CHEBYSHEV:
        return {"kind": KIND_CHEBYSHEV, "n": slow.n}
    return {"kind": slow.kind, "coeffs": slow.coeffs.tolist()}


def _poly_rows_deriv(rows: np.ndarray, order: int) -> np.ndarray:
    """Ascending coefficient rows of the order-th derivative, zero padded."""
    out = []
    for row in rows:
        d = npoly.polyder(row, m=order) if order else row
        out.append(np.atleast_1d(d))
    width = max(1, max(len(d) for d in out))
    padded = np.zeros((len(out), width))
    for i, d in enumerate(out):
        padded[i, : len(d)] = d
    return padded


def _cheb_levels(x, n: int):
    """Values and first three derivatives of T_1..T_n at x.

    Returns four arrays of shape (n,) + shape(x).  The derivative
    recurrences are the term-by-term derivatives of
    T_{i+1} = 2 x T_i - T_{i-1}.
    """
    x = np.asarray(x, dtype=np.float64)
    t_pp, t_p = np.ones_like(x), x.copy()
    d1_pp, d1_p = np.zeros_like(x), np.ones_like(x)
    d2_pp, d2_p = np.zeros_like(x), np.zeros_like(x)
    d3_pp, d3_p = np.zeros_like(x), np.zeros_like(x)
    vals, d1s, d2s, d3s = [t_p], [d1_p], [d2_p], [d3_p]
    for _ in range(1, n):
        t = 2.0 * x * t_p - t_pp
        d1 = 2.0 * t_p + 2.0 * x * d1_p - d1_pp
        d2 = 4.0 * d1_p + 2.0 * x * d2_p - d2_pp
        d3 = 6.0 * d2_p + 2.0 * x * d3_p - d3_pp
        vals.append(t)
        d1s.append(d1)
        d2s.append(d2)
        d3s.append(d3)
        t_pp, t_p = t_p, t
        d1_pp, d1_p = d1_p, d1
        d2_pp, d2_p = d2_p, d2
        d3_pp, d3_p = d3_p, d3
    return (np.stack(vals), np.stack(d1s), np.stack(d2s), np.stack(d3s))


def _basis_eval(slow: SlowPotential, x, order: int) -> np.ndarray:
    if slow.kind == KIND_CHEBYSHEV:
        return _cheb_levels(x, slow.n)[order]
    rows = _poly_rows_deriv(slow.coeffs, order)
    x = np.asarray(x, dtype=np.float64)
    return np.stack([npoly.polyval(x, row) for row in rows])


def value_V(slow: SlowPotential, x) -> np.ndarray:
    """Basis values (V_1(x), ..., V_N(x))."""
    return _basis_eval(slow, x, 0)


def grad_V(slow: SlowPotential, x) -> np.ndarray:
    """First derivatives (V_1'(x), ..., V_N'(x))."""
    return _basis_eval(slow, x, 1)


def hess_V(slow: SlowPotential, x) -> np.ndarray:
    """Second derivatives (V_1''(x), ..., V_N''(x))."""
    return _basis_eval(slow, x, 2)


def third_V(slow: SlowPotential, x) -> np.ndarray:
    """Third derivatives (V_1'''(x), ..., V_N'''(x))."""
    return _basis_eval(slow, x, 3)


def grad_V_many(slow: SlowPotential, xs: np.ndarray) -> np.ndarray:
    """Gradient rows for an array of points, shape (len(xs), N)."""
    return grad_V(slow, np.asarray(xs, dtype=np.float64)).T


def grad_tables(slow: SlowPotential):
    """(kind_code, derivative coefficient rows, N) for the jitted kernels."""
    if slow.kind == KIND_CHEBYSHEV:
        return _CODE_CHEB, np.zeros((slow.n, 1)), slow.n
    return _CODE_POLY, np.ascontiguousarray(_poly_rows_deriv(slow.coeffs, 1)), slow.n


@dataclass(frozen=True, eq=False)
class FastPotential:
    """Smooth L-periodic potential p acting at the fast scale.

    ``cos_amp`` is set for the built-in family p(y) = a cos(y), which is
    what the jitted simulation path understands; potentials defined by
    arbitrary callables are still valid for quadrature (and for the slow
    simulation fallback), and must accept numpy arrays.
    """

    p: Callable
    dp: Callable
    L: float
    cos_amp: float | None = None

    def __post_init__(self):
        if not self.L > 0:
            raise ValueError("period L must be positive")


def cosine_fast(amplitude: float = 1.0) -> FastPotential:
    """p(y) = amplitude * cos(y) with period 2 pi."""
    a = float(amplitude)
    return FastPotential(
        p=lambda y: a * np.cos(y),
        dp=lambda y: -a * np.sin(y),
        L=2.0 * math.pi,
        cos_amp=a,
    )


def zero_fast() -> FastPotential:
    """Vanishing fast potential (no multiscale structure)."""
    return cosine_fast(0.0)


@dataclass(frozen=True, eq=False)
class MultiscaleModel:
    """Two-scale model: drift -alpha.V'(x) - p'(x/eps)/eps, diffusion sqrt(2 sigma)."""

    slow: SlowPotential
    fast: FastPotential
    alpha: np.ndarray
    sigma: float
    eps: float

    def __post_init__(self):
        a = np.atleast_1d(np.asarray(self.alpha, dtype=np.float64))
        if a.shape != (self.slow.n,):
            raise ValueError("alpha dimension must equal the number of basis functions")
        object.__setattr__(self, "alpha", a)
        if not self.sigma > 0:
            raise ValueError("sigma must be positive")
        if not self.eps > 0:
            raise ValueError("eps must be positive")


def multiscale_drift(m: MultiscaleModel, x: float) -> float:
    """Full drift -alpha.V'(x) - p'(x/eps)/eps at a point.

    Accumulation order matches the jitted Euler-Maruyama kernel, so one
    integrator step is exactly x + multiscale_drift(m, x)*dt + noise.
    """
    g = grad_V(m.slow, float(x))
    s = 0.0
    for i in range(m.slow.n):
        s += m.alpha[i] * float(g[i])
    if m.fast.cos_amp is not None:
        if m.fast.cos_amp != 0.0:
            return -s + (m.fast.cos_amp / m.eps) * math.sin(x / m.eps)
        return -s
    return -s - float(m.fast.dp(x / m.eps)) / m.eps


def combined_leading_term(slow: SlowPotential, alpha: np.ndarray) -> tuple[int, float]:
    """(degree, coefficient) of the leading monomial of alpha . V."""
    alpha = np.atleast_1d(np.asarray(alpha, dtype=np.float64))
    if slow.kind == KIND_CHEBYSHEV:
        # T_i has leading coefficient 2**(i-1) for i >= 1
        for i in range(slow.n, 0, -1):
            if alpha[i - 1] != 0.0:
                return i, alpha[i - 1] * 2.0 ** (i - 1)
        return 0, 0.0
    combined = alpha @ slow.coeffs
    nz = np.nonzero(combined)[0]
    if nz.size == 0:
        return 0, 0.0
    return int(nz[-1]), float(combined[nz[-1]])


def dissipativity_warning(slow: SlowPotential, alpha) -> str | None:
    """Message if alpha . V is not confining (odd or non-positive leading term).

    Such potentials are still simulated; trajectories may escape to
    infinity, which the integrator reports as a non-finite state.
    """
    deg, coef = combined_leading_term(slow, alpha)
    if deg == 0:
        return "combined slow potential is constant; the process is not confined"
    if deg % 2 == 1:
        return f"combined slow potential has odd leading degree {deg}; not confining"
    if coef <= 0:
        return f"combined slow potential has non-positive leading coefficient {coef}; not confining"
    return None
