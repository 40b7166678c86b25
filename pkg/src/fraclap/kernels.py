"""Singular interaction kernel, its normalization constants, and the induced
mollification kernel.

The interaction kernel is eta(t) = C * t**(-d-2s) with the constant C chosen
so that the truncated first-coordinate second moment of eta over the unit
ball equals 1/2 for every s and d.  Two independent expressions for the
normalization are provided: the moment-based one (norm_const) and the
Fourier-symbol one (classical_const); const_ratio evaluates their quotient
through a single Gamma-function expression so that agreement of the two
routes can be checked to high precision.

The mollification kernel psi integrates eta against the radial coordinate
from a cutoff up to 1 and is flattened to a plateau below eps.  It is a
probability density; psi_moment gives its radial moments in closed form.
Closed-form antiderivatives of psi and of eta*t over subintervals
(psi_integrals, eta_t_integrals) are the workhorses of the mollifier module;
they are exact for piecewise-linear data and stable across s = 1/2 where the
naive power-function formulas degenerate.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Tuple

import numpy as np

from .errors import ConfigError

# below this distance from the degenerate exponent, logarithmic branches are used
_LOG_BRANCH_TOL = 1e-9


@dataclass(frozen=True)
class FracParams:
    """Differentiability order s in (0,1), plateau cutoff eps in [0,1),
    dimension d >= 1."""

    s: float
    eps: float = 0.0
    d: int = 1

    def __post_init__(self) -> None:
        if not (isinstance(self.d, int) and self.d >= 1):
            raise ConfigError(f"dimension must be an integer >= 1, got {self.d}")
        if not 0.0 < self.s < 1.0:
            raise ConfigError(f"s must lie in (0, 1), got {self.s}")
        if not 0.0 <= self.eps < 1.0:
            raise ConfigError(f"eps must lie in [0, 1), got {self.eps}")

    @property
    def plateau_scale(self) -> float:
        """Normalization 2 / (1 - eps**(2-2s)); equals 2 when eps = 0."""
        if self.eps == 0.0:
            return 2.0
        return 2.0 / -math.expm1((2.0 - 2.0 * self.s) * math.log(self.eps))


def sphere_measure(d: int) -> float:
    """Surface measure of the unit sphere in R^d (2, 2*pi, 4*pi, ...)."""
    if not (isinstance(d, int) and d >= 1):
        raise ConfigError(f"dimension must be an integer >= 1, got {d}")
    return 2.0 * math.pi ** (d / 2.0) / math.gamma(d / 2.0)


def norm_const(p: FracParams) -> float:
    """Moment normalization: (d / sphere_measure(d)) * (1 - s)."""
    return p.d / sphere_measure(p.d) * (1.0 - p.s)


def classical_const(p: FracParams) -> float:
    """Fourier-symbol normalization 4**(s-1) * Gamma(s+d/2) * s * (1-s)
    / (pi**(d/2) * Gamma(2-s)), evaluated in log space."""
    s, d = p.s, p.d
    lg = (
        (s - 1.0) * math.log(4.0)
        + math.lgamma(s + d / 2.0)
        - (d / 2.0) * math.log(math.pi)
        - math.lgamma(2.0 - s)
    )
    return math.exp(lg) * s * (1.0 - s)


def const_ratio(p: FracParams) -> float:
    """norm_const / classical_const as one Gamma quotient:
    Gamma(1+d/2) * Gamma(2-s) / (s * 4**(s-1) * Gamma(s+d/2))."""
    s, d = p.s, p.d
    lg = (
        math.lgamma(1.0 + d / 2.0)
        + math.lgamma(2.0 - s)
        - math.lgamma(s + d / 2.0)
        - (s - 1.0) * math.log(4.0)
    )
    return math.exp(lg) / s


def eta(p: FracParams, t: float) -> float:
    """Interaction kernel C * t**(-d-2s); requires t > 0."""
    if t <= 0.0:
        raise ValueError(f"eta requires t > 0, got t={t}")
    return norm_const(p) * t ** (-(p.d + 2.0 * p.s))


def _inner_tail(p: FracParams, a: float) -> float:
    """Integral of eta(tau)*tau over (a, 1), for a in [0, 1]."""
    C = norm_const(p)
    q = p.d + 2.0 * p.s - 2.0
    if a >= 1.0:
        return 0.0
    if abs(q) < _LOG_BRANCH_TOL:
        return math.inf if a == 0.0 else C * math.log(1.0 / a)
    if a == 0.0:
        return math.inf if q > 0.0 else C / (-q)
    return C * (a**-q - 1.0) / q


def psi(p: FracParams, t: float) -> float:
    """Mollification kernel at radius t >= 0.

    Plateau value for t <= eps, the eta-tail integral scaled by the plateau
    normalization for t in (eps, 1), zero for t >= 1.  For eps = 0 and
    d + 2s > 2 the value at t = 0 is infinite (integrable blowup).
    """
    if t < 0.0:
        raise ValueError(f"psi requires t >= 0, got t={t}")
    if t >= 1.0:
        return 0.0
    return p.plateau_scale * _inner_tail(p, max(p.eps, t))


def psi_moment(p: FracParams, alpha: float) -> float:
    """Radial moment of psi over R^d: integral of psi(|z|) |z|**alpha dz.

    Closed form
        (d/(d+alpha)) * ((1-s)/((1-s)+alpha/2))
        * (1 - eps**(2-2s+alpha)) / (1 - eps**(2-2s)),
    which equals 1 at alpha = 0 (psi is a probability density).
    """
    if alpha < 0.0:
        raise ValueError(f"moment order must be >= 0, got {alpha}")
    s, d, eps = p.s, p.d, p.eps
    base = d / (d + alpha) * (1.0 - s) / ((1.0 - s) + alpha / 2.0)
    if eps == 0.0:
        return base
    le = math.log(eps)
    ratio = math.expm1((2.0 - 2.0 * s + alpha) * le) / math.expm1((2.0 - 2.0 * s) * le)
    return base * ratio


def psi_bound_check(p: FracParams, t: float) -> Tuple[float, float]:
    """Pointwise envelope for psi at t in (0, 1): returns (psi(t), bound).

    The bound is plateau_scale * t**(1+s) * eta(t) in dimension 1 and
    plateau_scale * t**2 * eta(t) / (d + 2s - 2) for d >= 2.
    """
    if not 0.0 < t < 1.0:
        raise ValueError(f"bound check requires t in (0, 1), got t={t}")
    lhs = psi(p, t)
    if p.d == 1:
        rhs = p.plateau_scale * t ** (1.0 + p.s) * eta(p, t)
    else:
        rhs = p.plateau_scale * t**2 * eta(p, t) / (p.d + 2.0 * p.s - 2.0)
    return lhs, rhs


def psi_derivative(p: FracParams, t: float) -> float:
    """Radial derivative of psi: zero on the plateau and beyond radius 1,
    -plateau_scale * eta(t) * t on (eps, 1).  The kink at t = eps has no
    two-sided derivative and raises; at t = 1 the one-sided value 0 is
    returned."""
    if t <= 0.0:
        raise ValueError(f"psi_derivative requires t > 0, got t={t}")
    if t == p.eps:
        raise ValueError(f"psi has a kink at t = eps = {t}; no derivative")
    if t < p.eps or t >= 1.0:
        return 0.0
    return -p.plateau_scale * eta(p, t) * t


def _expm1_over_g(t: np.ndarray, g: float) -> np.ndarray:
    """(t**g - 1)/g elementwise for t > 0, continuous at g = 0 (-> log t)."""
    lt = np.log(t)
    u = g * lt
    small = np.abs(u) < 1e-4
    out = np.empty_like(lt)
    # series for expm1(u)/u, three terms is full precision at |u| < 1e-4
    us = u[small]
    out[small] = lt[small] * (1.0 + us / 2.0 + us * us / 6.0)
    ub = u[~small]
    out[~small] = np.expm1(ub) / g
    return out


def psi_integrals(p: FracParams, a, b) -> Tuple[np.ndarray, np.ndarray]:
    """Exact (integral of psi, integral of psi*t) over subintervals [a, b].

    a and b may be arrays; each pair must satisfy 0 <= a <= b.  Parts of
    [a, b] beyond radius 1 contribute zero, parts below eps use the plateau
    value, and the power region uses closed-form antiderivatives written so
    that they remain accurate through s = 1/2.  Only d = 1 is supported.
    """
    if p.d != 1:
        raise ConfigError(f"psi_integrals supports d=1 only, got d={p.d}")
    a = np.atleast_1d(np.asarray(a, dtype=float))
    b = np.atleast_1d(np.asarray(b, dtype=float))
    if a.shape != b.shape:
        raise ValueError("bounds a and b must have matching shapes")
    if np.any(a < 0.0) or np.any(b < a):
        raise ValueError("need 0 <= a <= b for every subinterval")
    M = p.plateau_scale
    C = norm_const(p)
    g = 1.0 - 2.0 * p.s
    K0 = np.zeros_like(a)
    K1 = np.zeros_like(a)

    # plateau piece [a, min(b, eps)]
    if p.eps > 0.0:
        pa = np.minimum(a, p.eps)
        pb = np.minimum(b, p.eps)
        has = pb > pa
        if np.any(has):
            val = psi(p, p.eps)
            K0[has] += val * (pb[has] - pa[has])
            K1[has] += val * (pb[has] ** 2 - pa[has] ** 2) / 2.0

    # power piece [max(a, eps), min(b, 1)]
    qa = np.clip(a, p.eps, 1.0)
    qb = np.clip(b, p.eps, 1.0)
    has = qb > qa
    if np.any(has):
        qa = qa[has]
        qb = qb[has]

        def tk_e(t: np.ndarray, k: int) -> np.ndarray:
            # t**k * (t**g - 1)/g with the t = 0 limit 0
            out = np.zeros_like(t)
            pos = t > 0.0
            out[pos] = t[pos] ** k * _expm1_over_g(t[pos], g)
            return out

        K0[has] += M * C / (2.0 - 2.0 * p.s) * ((qb - qa) - (tk_e(qb, 1) - tk_e(qa, 1)))
        K1[has] += (
            M * C / (3.0 - 2.0 * p.s) * ((qb**2 - qa**2) / 2.0 - (tk_e(qb, 2) - tk_e(qa, 2)))
        )
    return K0, K1


def eta_t_integrals(p: FracParams, a, b) -> Tuple[np.ndarray, np.ndarray]:
    """Exact (integral of eta*t, integral of eta*t**2) over [a, b] with
    0 < a <= b.  Only d = 1 is supported; the first integral switches to its
    logarithmic branch at s = 1/2."""
    if p.d != 1:
        raise ConfigError(f"eta_t_integrals supports d=1 only, got d={p.d}")
    a = np.atleast_1d(np.asarray(a, dtype=float))
    b = np.atleast_1d(np.asarray(b, dtype=float))
    if a.shape != b.shape:
        raise ValueError("bounds a and b must have matching shapes")
    if np.any(a <= 0.0) or np.any(b < a):
        raise ValueError("need 0 < a <= b for every subinterval")
    C = norm_const(p)
    g = 1.0 - 2.0 * p.s
    # int eta t = C (b**g - a**g)/g, continuous at g = 0
    G0 = C * (_expm1_over_g(b, g) - _expm1_over_g(a, g))
    # int eta t^2 = C (b**(1+g) - a**(1+g))/(1+g), written around the linear part
    tE_b = b * np.expm1(g * np.log(b))
    tE_a = a * np.expm1(g * np.log(a))
    G1 = C * ((b - a) + (tE_b - tE_a)) / (2.0 - 2.0 * p.s)
    return G0, G1
