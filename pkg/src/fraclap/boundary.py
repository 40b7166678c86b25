"""Boundary strips and the interpolated competitor for the local problem.

Given a nonlocal solution with complement data g, the competitor equals g
outside Omega, equals the smoothed solution deep inside, and ramps linearly
between the two across an inner strip of width r.  The checks here bound how
far the competitor sits from the smoothed solution, in sup and L2 senses,
and measure the induced gap in the local objective.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Tuple, Union

import numpy as np

from .energies import objective_local
from .errors import ConfigError, ShapeError
from .grid import Domain, GridFunction, l2_norm
from .kernels import FracParams
from .mollifier import mollify


@dataclass(frozen=True)
class StripSpec:
    """Widths of the inner strip (r, inside Omega) and outer strip (rho,
    outside Omega) used when reporting boundary experiments."""

    r: float
    rho: float

    def __post_init__(self) -> None:
        if not (math.isfinite(self.r) and self.r > 0.0):
            raise ConfigError(f"strip width r must be positive, got {self.r}")
        if not (math.isfinite(self.rho) and 0.0 < self.rho <= 1.0):
            raise ConfigError(f"outer width rho must lie in (0, 1], got {self.rho}")

    def validate_for(self, dom: Domain) -> None:
        if self.r >= dom.omega_measure / 2.0:
            raise ConfigError(
                f"strip width r={self.r} must be below half of |Omega|="
                f"{dom.omega_measure}"
            )


def dist_to_complement(dom: Domain, x: Union[float, np.ndarray]) -> Union[float, np.ndarray]:
    """Distance from x to the complement of Omega; zero outside."""
    xx = np.asarray(x, dtype=float)
    out = np.clip(np.minimum(xx - dom.omega_lo, dom.omega_hi - xx), 0.0, None)
    if np.isscalar(x) or xx.ndim == 0:
        return float(out)
    return out


def strip_measure(dom: Domain, r: float) -> float:
    """Measure of the inner strip of width r; saturates at |Omega|."""
    if not r > 0.0:
        raise ConfigError(f"strip width r must be positive, got {r}")
    return min(2.0 * r, dom.omega_measure)


def _check_pair(u_s: GridFunction, g: GridFunction) -> None:
    if u_s.domain != g.domain or u_s.n != g.n:
        raise ShapeError("u_s and g must live on the same grid")


def build_w(u_s: GridFunction, g: GridFunction, p: FracParams, r: float) -> GridFunction:
    """Competitor equal to g outside Omega, to the smoothed u_s at depth
    >= r inside, with a linear ramp across the strip."""
    _check_pair(u_s, g)
    StripSpec(r=r, rho=1.0).validate_for(u_s.domain)
    lam = np.clip(dist_to_complement(u_s.domain, u_s.nodes) / r, 0.0, 1.0)
    smoothed = mollify(u_s, p)
    return u_s.with_values((1.0 - lam) * g.values + lam * smoothed.values)


def check_strip_closeness(
    u_s: GridFunction,
    g: GridFunction,
    p: FracParams,
    r: float,
    hold_us: float,
    hold_g: float,
) -> Tuple[float, float]:
    """Sup distance between the smoothed solution and the competitor over the
    inner strip, versus 2 (hold_us + hold_g) (r^s + (1-s)/(1-eps^(2-2s))).

    hold_us and hold_g are Holder seminorms of exponent s for the two data
    functions (analytic if known, otherwise grid estimates)."""
    _check_pair(u_s, g)
    w = build_w(u_s, g, p, r)
    smoothed = mollify(u_s, p)
    dist = dist_to_complement(u_s.domain, u_s.nodes)
    tol = 1e-9 * u_s.h
    strip = (dist > tol) & (dist <= r + tol)
    diff = np.abs(smoothed.values - w.values)
    lhs = float(np.max(diff[strip])) if np.any(strip) else 0.0
    rhs = 2.0 * (hold_us + hold_g) * (r**p.s + (1.0 - p.s) * p.plateau_scale / 2.0)
    return lhs, rhs


def check_strip_l2(
    u_s: GridFunction,
    g: GridFunction,
    p: FracParams,
    r: float,
    hold_us: float,
    hold_g: float,
) -> Tuple[float, float]:
    """Squared L2(Omega) distance between the smoothed solution and the
    competitor, versus
    8 (hold_us^2 + hold_g^2) (r^(1+2s) + ((1-s)/(1-eps^(2-2s)))^2 r)."""
    _check_pair(u_s, g)
    w = build_w(u_s, g, p, r)
    smoothed = mollify(u_s, p)
    lhs = l2_norm(smoothed - w, region="omega") ** 2
    near = (1.0 - p.s) * p.plateau_scale / 2.0
    rhs = 8.0 * (hold_us**2 + hold_g**2) * (r ** (1.0 + 2.0 * p.s) + near**2 * r)
    return lhs, rhs


def energy_gap(
    u_s: GridFunction,
    g: GridFunction,
    f: GridFunction,
    p: FracParams,
    r: float,
) -> float:
    """Absolute difference of the local objective between the competitor and
    the smoothed solution."""
    _check_pair(u_s, g)
    w = build_w(u_s, g, p, r)
    smoothed = mollify(u_s, p)
    return abs(objective_local(w, f) - objective_local(smoothed, f))
