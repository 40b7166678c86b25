"""Report containers, least-squares slope fitting, and deterministic CSV /
SVG emission.

Byte determinism is a contract: fixed inputs must reproduce identical files,
so formatting is pinned to %.12g for data and fixed-precision pixel
coordinates for plots, with no timestamps or environment-dependent content.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, List, Sequence, Tuple, Union

import numpy as np

from .errors import ConfigError


def _fmt(v: float) -> str:
    return "%.12g" % v


def fit_line(x: Sequence[float], y: Sequence[float]) -> Tuple[float, float, float]:
    """Least-squares line fit; returns (slope, intercept, r_squared)."""
    xa = np.asarray(x, dtype=float)
    ya = np.asarray(y, dtype=float)
    if xa.shape != ya.shape or xa.ndim != 1:
        raise ConfigError("fit_line needs two equally sized 1-d sequences")
    if xa.size < 2 or np.ptp(xa) == 0.0:
        raise ConfigError("fit_line needs at least two distinct x values")
    xm = xa.mean()
    ym = ya.mean()
    sxx = float(np.sum((xa - xm) ** 2))
    slope = float(np.sum((xa - xm) * (ya - ym)) / sxx)
    intercept = ym - slope * xm
    resid = ya - (intercept + slope * xa)
    ss_res = float(np.sum(resid**2))
    ss_tot = float(np.sum((ya - ym) ** 2))
    r2 = 1.0 if ss_tot == 0.0 else 1.0 - ss_res / ss_tot
    return slope, float(intercept), float(r2)


def _fit_loglog(pts: Sequence[Tuple[float, float]]) -> Tuple[float, float, float]:
    """Fit y = c * x**slope through positive points; returns (slope, r2, c)."""
    usable = [(px, py) for px, py in pts if px > 0.0 and py > 0.0]
    if len(usable) < 2:
        raise ConfigError("need at least two positive points for a log-log fit")
    lx = [math.log(px) for px, _ in usable]
    ly = [math.log(py) for _, py in usable]
    slope, intercept, r2 = fit_line(lx, ly)
    return slope, r2, math.exp(intercept)


@dataclass(frozen=True)
class RateRow:
    s: float
    seminorm_err: float
    l2_err: float
    total_ws2_err: float
    energy_gap: float
    seconds: float


@dataclass(frozen=True)
class RateReport:
    """Error-versus-s sweep with a log-log fit of the total error norm
    against 1-s over the rows with s >= fit_min_s."""

    rows: Tuple[RateRow, ...]
    slope: float
    r2: float
    c_emp: float
    fit_min_s: float

    def plot_points(self) -> List[Tuple[float, float]]:
        return [(1.0 - r.s, r.total_ws2_err) for r in self.rows]

    def plot_labels(self) -> Tuple[str, str]:
        return ("1-s", "error norm")

    def to_csv(self) -> str:
        lines = ["s,one_minus_s,err_ws2_sq,err_l2,energy_gap,seconds"]
        for r in self.rows:
            lines.append(
                ",".join(
                    _fmt(v)
                    for v in (
                        r.s,
                        1.0 - r.s,
                        r.total_ws2_err**2,
                        r.l2_err,
                        r.energy_gap,
                        r.seconds,
                    )
                )
            )
        if self.rows:
            lines.append(f"# slope={_fmt(self.slope)} r2={_fmt(self.r2)}")
        return "\n".join(lines) + "\n"


def build_rate_report(rows: Iterable[RateRow], fit_min_s: float) -> RateReport:
    ordered = tuple(sorted(rows, key=lambda r: r.s))
    fit_pts = [(1.0 - r.s, r.total_ws2_err) for r in ordered if r.s >= fit_min_s]
    slope, r2, c_emp = _fit_loglog(fit_pts)
    return RateReport(rows=ordered, slope=slope, r2=r2, c_emp=c_emp, fit_min_s=fit_min_s)


@dataclass(frozen=True)
class ConsistencyRow:
    s: float
    max_abs_err: float
    seconds: float


@dataclass(frozen=True)
class ConsistencyReport:
    rows: Tuple[ConsistencyRow, ...]
    slope: float
    r2: float
    c_emp: float
    fit_min_s: float

    def plot_points(self) -> List[Tuple[float, float]]:
        return [(1.0 - r.s, r.max_abs_err) for r in self.rows]

    def plot_labels(self) -> Tuple[str, str]:
        return ("1-s", "max pointwise error")

    def to_csv(self) -> str:
        lines = ["s,one_minus_s,max_abs_err,seconds"]
        for r in self.rows:
            lines.append(",".join(_fmt(v) for v in (r.s, 1.0 - r.s, r.max_abs_err, r.seconds)))
        if self.rows:
            lines.append(f"# slope={_fmt(self.slope)} r2={_fmt(self.r2)}")
        return "\n".join(lines) + "\n"


def build_consistency_report(
    rows: Iterable[ConsistencyRow], fit_min_s: float
) -> ConsistencyReport:
    ordered = tuple(sorted(rows, key=lambda r: r.s))
    fit_pts = [(1.0 - r.s, r.max_abs_err) for r in ordered if r.s >= fit_min_s]
    slope, r2, c_emp = _fit_loglog(fit_pts)
    return ConsistencyReport(
        rows=ordered, slope=slope, r2=r2, c_emp=c_emp, fit_min_s=fit_min_s
    )


@dataclass(frozen=True)
class CheckRow:
    name: str
    value: float
    bound: float
    passed: bool


@dataclass(frozen=True)
class CheckReport:
    rows: Tuple[CheckRow, ...]

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.rows)

    def to_csv(self) -> str:
        lines = ["name,value,bound,passed"]
        for r in self.rows:
            flag = "true" if r.passed else "false"
            lines.append(f"{r.name},{_fmt(r.value)},{_fmt(r.bound)},{flag}")
        return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class SolveReport:
    """Nodal solution values, one block per s, in long (s, x, u) form."""

    blocks: Tuple[Tuple[float, Tuple[float, ...], Tuple[float, ...]], ...]

    def to_csv(self) -> str:
        lines = ["s,x,u"]
        for s, xs, us in self.blocks:
            for xv, uv in zip(xs, us):
                lines.append(",".join(_fmt(v) for v in (s, xv, uv)))
        return "\n".join(lines) + "\n"


def emit_csv(report, path: Union[str, Path]) -> None:
    """Write the report's CSV form; byte-identical for identical reports."""
    target = Path(path)
    try:
        target.write_text(report.to_csv(), encoding="utf-8", newline="\n")
    except OSError as exc:
        raise ConfigError(f"cannot write {target}: {exc}") from exc


_W, _H = 640.0, 480.0
_LEFT, _RIGHT, _TOP, _BOT = 80.0, 610.0, 30.0, 420.0


def _log_range(vals: Sequence[float]) -> Tuple[float, float]:
    lo = math.log10(min(vals))
    hi = math.log10(max(vals))
    if hi - lo < 1e-12:
        lo, hi = lo - 0.5, hi + 0.5
    pad = 0.05 * (hi - lo)
    return lo - pad, hi + pad


def emit_svg(report, path: Union[str, Path]) -> None:
    """Log-log scatter of the report's points with its fitted power law.

    Markers are circle elements (one per point), the fit is the single line
    element, axes and ticks are path elements; output bytes depend only on
    the report contents.
    """
    if not hasattr(report, "plot_points"):
        raise ConfigError(f"report type {type(report).__name__} has no plottable points")
    pts = [(px, py) for px, py in report.plot_points() if px > 0.0 and py > 0.0]
    xlabel, ylabel = report.plot_labels()

    if pts:
        xr = _log_range([p[0] for p in pts])
        yr = _log_range([p[1] for p in pts])
    else:
        xr, yr = (-1.0, 0.0), (-1.0, 0.0)

    def px(lx: float) -> float:
        return _LEFT + (lx - xr[0]) / (xr[1] - xr[0]) * (_RIGHT - _LEFT)

    def py(ly: float) -> float:
        return _BOT - (ly - yr[0]) / (yr[1] - yr[0]) * (_BOT - _TOP)

    parts: List[str] = []
    parts.append(
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_W:.0f}" '
        f'height="{_H:.0f}" viewBox="0 0 {_W:.0f} {_H:.0f}">'
    )
    parts.append(f'<rect x="0" y="0" width="{_W:.0f}" height="{_H:.0f}" fill="white"/>')

    xticks = np.linspace(xr[0], xr[1], 5)[1:-1]
    yticks = np.linspace(yr[0], yr[1], 5)[1:-1]
    xaxis = [f"M {_LEFT:.2f} {_BOT:.2f} L {_RIGHT:.2f} {_BOT:.2f}"]
    for t in xticks:
        xaxis.append(f"M {px(t):.2f} {_BOT:.2f} L {px(t):.2f} {_BOT + 6:.2f}")
    yaxis = [f"M {_LEFT:.2f} {_BOT:.2f} L {_LEFT:.2f} {_TOP:.2f}"]
    for t in yticks:
        yaxis.append(f"M {_LEFT:.2f} {py(t):.2f} L {_LEFT - 6:.2f} {py(t):.2f}")
    parts.append(f'<path d="{" ".join(xaxis)}" stroke="black" fill="none"/>')
    parts.append(f'<path d="{" ".join(yaxis)}" stroke="black" fill="none"/>')
    for t in xticks:
        parts.append(
            f'<text x="{px(t):.2f}" y="{_BOT + 22:.2f}" font-size="12" '
            f'text-anchor="middle">{10.0**t:.2g}</text>'
        )
    for t in yticks:
        parts.append(
            f'<text x="{_LEFT - 10:.2f}" y="{py(t) + 4:.2f}" font-size="12" '
            f'text-anchor="end">{10.0**t:.2g}</text>'
        )
    parts.append(
        f'<text x="{0.5 * (_LEFT + _RIGHT):.2f}" y="{_H - 12:.2f}" font-size="14" '
        f'text-anchor="middle">{xlabel}</text>'
    )
    parts.append(
        f'<text x="16" y="{0.5 * (_TOP + _BOT):.2f}" font-size="14" '
        f'text-anchor="middle" transform="rotate(-90 16 {0.5 * (_TOP + _BOT):.2f})">'
        f"{ylabel}</text>"
    )

    slope = getattr(report, "slope", None)
    c_emp = getattr(report, "c_emp", None)
    if slope is not None and c_emp is not None and c_emp > 0.0 and pts:
        # fitted model y = c * x**slope, drawn across the padded x range
        y0 = math.log10(c_emp) + slope * xr[0]
        y1 = math.log10(c_emp) + slope * xr[1]
        parts.append(
            f'<line x1="{px(xr[0]):.2f}" y1="{py(y0):.2f}" x2="{px(xr[1]):.2f}" '
            f'y2="{py(y1):.2f}" stroke="#d62728" stroke-width="1.5"/>'
        )
        parts.append(
            f'<text x="{_RIGHT - 8:.2f}" y="{_TOP + 16:.2f}" font-size="13" '
            f'text-anchor="end">slope={slope:.3g}</text>'
        )
    for qx, qy in pts:
        parts.append(
            f'<circle cx="{px(math.log10(qx)):.2f}" cy="{py(math.log10(qy)):.2f}" '
            f'r="4" fill="#1f77b4"/>'
        )
    parts.append("</svg>")
    target = Path(path)
    try:
        target.write_text("\n".join(parts) + "\n", encoding="utf-8", newline="\n")
    except OSError as exc:
        raise ConfigError(f"cannot write {target}: {exc}") from exc
