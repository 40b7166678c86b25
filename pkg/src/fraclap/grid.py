"""Uniform grids on a truncation box around an open interval.

The computational domain is an open interval (omega_lo, omega_hi) embedded in
a larger box [box_lo, box_hi] on which all piecewise-linear (P1) functions
live.  The box must leave a margin of at least 1 on each side of the interval
so that every unit-radius neighborhood of an interval point stays inside the
box; several operators in this package integrate over such neighborhoods.

Grid functions are P1: values at the uniform nodes, linear in between, and
extended by their boundary value outside the box (constant extension).  A
function that vanishes at the box ends is therefore extended by zero.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Tuple

import numpy as np

from .errors import ConfigError, DataError, ShapeError

_REGIONS = ("omega", "box")


@dataclass(frozen=True)
class Domain:
    """Open interval (omega_lo, omega_hi) inside the box [box_lo, box_hi]."""

    omega_lo: float
    omega_hi: float
    box_lo: float
    box_hi: float

    def __post_init__(self) -> None:
        vals = (self.omega_lo, self.omega_hi, self.box_lo, self.box_hi)
        if not all(math.isfinite(v) for v in vals):
            raise ConfigError(f"domain endpoints must be finite, got {vals}")
        if not self.omega_lo < self.omega_hi:
            raise ConfigError(
                f"empty interval: omega_lo={self.omega_lo} >= omega_hi={self.omega_hi}"
            )
        # margin >= 1 on both sides, up to a rounding allowance
        tol = 1e-12 * max(1.0, abs(self.omega_lo), abs(self.omega_hi))
        if self.box_lo > self.omega_lo - 1 + tol or self.box_hi < self.omega_hi + 1 - tol:
            raise ConfigError(
                "box must extend at least 1 beyond the interval on each side: "
                f"interval ({self.omega_lo}, {self.omega_hi}), box [{self.box_lo}, {self.box_hi}]"
            )

    @property
    def omega_measure(self) -> float:
        return self.omega_hi - self.omega_lo

    @property
    def box_measure(self) -> float:
        return self.box_hi - self.box_lo


@dataclass(frozen=True)
class GridFunction:
    """P1 function: values at n uniform nodes spanning the box.

    Outside the box the function takes its boundary node value (constant
    extension).  Instances are immutable; arithmetic returns new instances.
    """

    domain: Domain
    n: int
    values: np.ndarray = field(repr=False)

    def __post_init__(self) -> None:
        if self.n < 3:
            raise ConfigError(f"need at least 3 nodes, got n={self.n}")
        vals = np.asarray(self.values, dtype=float)
        if vals.shape != (self.n,):
            raise ShapeError(f"values shape {vals.shape} != ({self.n},)")
        if not np.all(np.isfinite(vals)):
            raise DataError("grid function values must be finite")
        vals = vals.copy()
        vals.flags.writeable = False
        object.__setattr__(self, "values", vals)

    @property
    def nodes(self) -> np.ndarray:
        return np.linspace(self.domain.box_lo, self.domain.box_hi, self.n)

    @property
    def h(self) -> float:
        return (self.domain.box_hi - self.domain.box_lo) / (self.n - 1)

    def eval(self, x) -> np.ndarray | float:
        """Evaluate the interpolant at x (scalar or array), with constant
        extension outside the box."""
        x = np.asarray(x, dtype=float)
        out = np.interp(x, self.nodes, self.values)
        return float(out) if out.ndim == 0 else out

    def with_values(self, values) -> "GridFunction":
        return GridFunction(self.domain, self.n, np.asarray(values, dtype=float))

    def _check_same_grid(self, other: "GridFunction") -> None:
        if self.domain != other.domain or self.n != other.n:
            raise ShapeError("grid functions live on different grids")

    def __add__(self, other: "GridFunction") -> "GridFunction":
        self._check_same_grid(other)
        return self.with_values(self.values + other.values)

    def __sub__(self, other: "GridFunction") -> "GridFunction":
        self._check_same_grid(other)
        return self.with_values(self.values - other.values)

    def __mul__(self, c: float) -> "GridFunction":
        return self.with_values(self.values * float(c))

    __rmul__ = __mul__


def make_grid(domain: Domain, n: int) -> GridFunction:
    """Zero grid function on n uniform nodes over the domain's box."""
    if n < 3:
        raise ConfigError(f"need at least 3 nodes, got n={n}")
    return GridFunction(domain, n, np.zeros(n))


def sample(domain: Domain, n: int, f: Callable) -> GridFunction:
    """Sample the callable f at the nodes.  Non-finite samples raise DataError
    naming the first offending node."""
    phi = make_grid(domain, n)
    x = phi.nodes
    try:
        vals = np.asarray(f(x), dtype=float)
        ok = vals.shape == x.shape
    except (TypeError, ValueError):
        ok = False
    if not ok:
        vals = np.array([float(f(xi)) for xi in x])
    bad = np.where(~np.isfinite(vals))[0]
    if bad.size:
        raise DataError(
            f"non-finite sample {vals[bad[0]]!r} at node {bad[0]} (x={x[bad[0]]})"
        )
    return phi.with_values(vals)


def _check_region(region: str) -> None:
    if region not in _REGIONS:
        raise ConfigError(f"unknown region {region!r}, expected one of {_REGIONS}")


def _clip_bounds(domain: Domain, region: str) -> Tuple[float, float]:
    if region == "omega":
        return domain.omega_lo, domain.omega_hi
    return domain.box_lo, domain.box_hi


def product_integral(phi: GridFunction, psi: GridFunction, region: str = "box") -> float:
    """Exact integral of the product of two P1 functions on the same grid,
    restricted to the region (cells clipped exactly)."""
    _check_region(region)
    phi._check_same_grid(psi)
    lo, hi = _clip_bounds(phi.domain, region)
    x = phi.nodes
    h = phi.h
    a = np.maximum(x[:-1], lo)
    b = np.minimum(x[1:], hi)
    mask = b > a
    if not np.any(mask):
        return 0.0
    a = a[mask]
    b = b[mask]
    x0 = x[:-1][mask]
    p0 = phi.values[:-1][mask]
    p1 = phi.values[1:][mask]
    q0 = psi.values[:-1][mask]
    q1 = psi.values[1:][mask]
    mp = (p1 - p0) / h
    mq = (q1 - q0) / h
    ta = a - x0
    tb = b - x0
    # integral of (p0 + mp t)(q0 + mq t) dt over [ta, tb], exact
    d1 = tb - ta
    d2 = (tb**2 - ta**2) / 2.0
    d3 = (tb**3 - ta**3) / 3.0
    cells = p0 * q0 * d1 + (p0 * mq + q0 * mp) * d2 + mp * mq * d3
    return float(np.sum(cells))


def l2_norm(phi: GridFunction, region: str = "box") -> float:
    """Exact L2 norm of the interpolant over the region."""
    return math.sqrt(max(0.0, product_integral(phi, phi, region)))


def linf_distance(phi: GridFunction, psi: GridFunction, region: str = "box") -> float:
    """Max absolute nodal difference over the nodes lying in the region."""
    _check_region(region)
    phi._check_same_grid(psi)
    lo, hi = _clip_bounds(phi.domain, region)
    x = phi.nodes
    tol = 1e-9 * phi.h
    mask = (x >= lo - tol) & (x <= hi + tol)
    return float(np.max(np.abs(phi.values[mask] - psi.values[mask])))


@dataclass(frozen=True)
class QuadratureRule:
    """1D quadrature nodes/weights on a reference task.

    kind "gauss_legendre" integrates smooth integrands on [a, b].  kind
    "gauss_jacobi" integrates integrands with an algebraic endpoint factor
    (b - t)**exponent built into the weight; exponent must exceed -1.
    """

    kind: str
    order: int
    exponent: float = 0.0

    def __post_init__(self) -> None:
        if self.kind not in ("gauss_legendre", "gauss_jacobi"):
            raise ConfigError(f"unknown quadrature kind {self.kind!r}")
        if self.order < 1:
            raise ConfigError(f"quadrature order must be >= 1, got {self.order}")
        if self.kind == "gauss_jacobi" and not self.exponent > -1:
            raise ConfigError(f"jacobi exponent must exceed -1, got {self.exponent}")

    def nodes_weights(self, a: float, b: float) -> Tuple[np.ndarray, np.ndarray]:
        """Nodes strictly inside (a, b) and positive weights.

        For gauss_jacobi the weights absorb the factor (b - t)**exponent, so
        the caller integrates the remaining smooth part only.
        """
        if not b > a:
            raise ConfigError(f"empty quadrature interval [{a}, {b}]")
        half = 0.5 * (b - a)
        mid = 0.5 * (a + b)
        if self.kind == "gauss_legendre":
            t, w = np.polynomial.legendre.leggauss(self.order)
            return mid + half * t, half * w
        from scipy.special import roots_jacobi

        # weight (1-t)^alpha on [-1,1]; map t -> mid + half*t so that
        # (1-t)^alpha -> ((b - x)/half)^alpha
        t, w = roots_jacobi(self.order, self.exponent, 0.0)
        x = mid + half * t
        return x, w * half ** (self.exponent + 1)
