"""Plain-text experiment configuration: `key = value` lines, `#` comments,
comma-separated lists.  Unknown keys are rejected by name so typos fail
loudly instead of silently running defaults.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, fields, replace
from pathlib import Path
from typing import Dict, Tuple, Union

from .errors import ConfigError
from .grid import Domain
from .profiles import Profile, make_profile

EXPERIMENTS = ("kernel_check", "mollifier_check", "solve", "consistency", "rates")

# experiments that assemble or invert the nonlocal operator keep s inside
# the well-conditioned band
_SOLVING = ("rates", "solve", "consistency")
_S_BAND = (0.25, 0.995)


@dataclass(frozen=True)
class ExperimentConfig:
    experiment: str
    s_list: Tuple[float, ...]
    n: int = 513
    eps: float = 0.0
    omega_lo: float = -1.0
    omega_hi: float = 1.0
    box_lo: float = -2.0
    box_hi: float = 2.0
    r_rule: str = "paper"
    rho_rule: str = "paper"
    f_spec: str = "constant:1"
    f_s_spec: str = ""
    g_spec: str = "gaussian"
    pert_mode: str = "none"
    pert_profile: str = "bump:amplitude=1,center=0,width=0.5"
    pert_scale: float = 0.1
    fit_min_s: float = 0.6
    output_dir: str = "out"
    seed: int = 42

    @property
    def domain(self) -> Domain:
        return Domain(self.omega_lo, self.omega_hi, self.box_lo, self.box_hi)

    def f_profile(self) -> Profile:
        return make_profile(self.f_spec)

    def f_s_profile(self) -> Profile:
        return make_profile(self.f_s_spec or self.f_spec)

    def g_profile(self) -> Profile:
        return make_profile(self.g_spec)

    def pert(self) -> Profile:
        return make_profile(self.pert_profile)

    def r_value(self, s: float) -> float:
        if self.r_rule == "paper":
            return (1.0 - s) ** (1.0 / s)
        return float(self.r_rule.split(":", 1)[1])

    def rho_value(self, s: float) -> float:
        if self.rho_rule == "paper":
            return 1.0 - s
        if self.rho_rule == "log":
            return min(1.0, (1.0 - s) * abs(math.log((1.0 - s) / 2.0)))
        return float(self.rho_rule.split(":", 1)[1])

    def pert_coeff(self, s: float) -> float:
        if self.pert_mode == "none":
            return 0.0
        if self.pert_mode == "shrinking":
            return 1.0 - s
        return self.pert_scale


_FIELD_NAMES = tuple(f.name for f in fields(ExperimentConfig))
_REQUIRED = ("experiment", "s_list")


def _parse_float(key: str, raw: str) -> float:
    try:
        v = float(raw)
    except ValueError as exc:
        raise ConfigError(f"key '{key}': bad number '{raw}'") from exc
    if not math.isfinite(v):
        raise ConfigError(f"key '{key}': value must be finite, got {raw}")
    return v


def _parse_int(key: str, raw: str) -> int:
    try:
        return int(raw)
    except ValueError as exc:
        raise ConfigError(f"key '{key}': bad integer '{raw}'") from exc


def _read_pairs(path: Union[str, Path]) -> Dict[str, str]:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path}: {exc}") from exc
    pairs: Dict[str, str] = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        body = line.split("#", 1)[0].strip()
        if not body:
            continue
        key, eq, value = body.partition("=")
        if not eq:
            raise ConfigError(f"{path}:{lineno}: expected 'key = value', got '{body}'")
        key = key.strip()
        if key in pairs:
            raise ConfigError(f"{path}:{lineno}: duplicate key '{key}'")
        pairs[key] = value.strip()
    return pairs


def parse_config(path: Union[str, Path]) -> ExperimentConfig:
    """Read, type, and validate a config file; defaults fill missing keys."""
    pairs = _read_pairs(path)
    unknown = sorted(set(pairs) - set(_FIELD_NAMES))
    if unknown:
        raise ConfigError(f"unknown config keys: {', '.join(unknown)}")
    missing = [k for k in _REQUIRED if k not in pairs]
    if missing:
        raise ConfigError(f"missing required keys: {', '.join(missing)}")

    kwargs: Dict[str, object] = {}
    for key, raw in pairs.items():
        if key == "s_list":
            items = [t.strip() for t in raw.split(",") if t.strip()]
            if not items:
                raise ConfigError("s_list must not be empty")
            kwargs[key] = tuple(_parse_float("s_list", t) for t in items)
        elif key in ("n", "seed"):
            kwargs[key] = _parse_int(key, raw)
        elif key in ("eps", "omega_lo", "omega_hi", "box_lo", "box_hi", "pert_scale", "fit_min_s"):
            kwargs[key] = _parse_float(key, raw)
        else:
            kwargs[key] = raw
    cfg = ExperimentConfig(**kwargs)  # type: ignore[arg-type]
    _validate(cfg)
    return cfg


def _validate(cfg: ExperimentConfig) -> None:
    if cfg.experiment not in EXPERIMENTS:
        raise ConfigError(
            f"unknown experiment '{cfg.experiment}'; expected one of: "
            + ", ".join(EXPERIMENTS)
        )
    for s in cfg.s_list:
        if not 0.0 < s < 1.0:
            raise ConfigError(f"s_list values must lie in (0, 1), got {s}")
    if cfg.experiment in _SOLVING:
        lo, hi = _S_BAND
        for s in cfg.s_list:
            if not lo <= s <= hi:
                raise ConfigError(
                    f"experiment '{cfg.experiment}' needs s in [{lo}, {hi}], got {s}"
                )
    if cfg.n < 33:
        raise ConfigError(f"n must be at least 33, got {cfg.n}")
    if not 0.0 <= cfg.eps < 1.0:
        raise ConfigError(f"eps must lie in [0, 1), got {cfg.eps}")
    if not cfg.output_dir:
        raise ConfigError("output_dir must not be empty")
    if not 0.0 < cfg.fit_min_s < 1.0:
        raise ConfigError(f"fit_min_s must lie in (0, 1), got {cfg.fit_min_s}")
    if cfg.pert_mode not in ("none", "shrinking", "fixed"):
        raise ConfigError(
            f"pert_mode must be none, shrinking, or fixed, got '{cfg.pert_mode}'"
        )
    for rule, allowed in (("r_rule", ("paper",)), ("rho_rule", ("paper", "log"))):
        value = getattr(cfg, rule)
        if value in allowed:
            continue
        head, sep, tail = value.partition(":")
        if head != "fixed" or not sep:
            raise ConfigError(
                f"{rule} must be one of {', '.join(allowed)} or fixed:<value>, "
                f"got '{value}'"
            )
        v = _parse_float(rule, tail)
        if rule == "r_rule" and v <= 0.0:
            raise ConfigError(f"r_rule fixed value must be positive, got {v}")
        if rule == "rho_rule" and not 0.0 < v <= 1.0:
            raise ConfigError(f"rho_rule fixed value must lie in (0, 1], got {v}")
    try:
        cfg.domain
    except ConfigError as exc:
        raise ConfigError(f"bad domain bounds: {exc}") from exc
    for builder in (cfg.f_profile, cfg.f_s_profile, cfg.g_profile, cfg.pert):
        builder()


def with_overrides(cfg: ExperimentConfig, **kwargs) -> ExperimentConfig:
    """Functional update used by the CLI for --out and --seed."""
    out = replace(cfg, **kwargs)
    _validate(out)
    return out
