"""Closed catalog of analytic profiles used as sources, complement data,
and random test functions.

Profiles are referenced from configs as `name` or `name:arg,key=value,...`
(positional arguments bind in the order listed per profile below).  Keeping
the catalog closed makes configs reproducible without an expression parser.
"""

from __future__ import annotations

from typing import Callable, Dict, Optional, Sequence, Tuple, Union

import numpy as np

from .errors import ConfigError
from .grid import Domain, GridFunction, sample

ArrayLike = Union[float, np.ndarray]


class Profile:
    """Analytic profile with optional first/second derivatives.

    Callable and vectorized; derivative accessors raise when the profile is
    not smooth enough (abspow at its center, for example).
    """

    def __init__(
        self,
        name: str,
        params: Dict[str, float],
        value: Callable[[np.ndarray], np.ndarray],
        deriv: Optional[Callable[[np.ndarray], np.ndarray]] = None,
        deriv2: Optional[Callable[[np.ndarray], np.ndarray]] = None,
    ) -> None:
        self.name = name
        self.params = dict(params)
        self._value = value
        self._deriv = deriv
        self._deriv2 = deriv2

    def _apply(self, fn: Callable[[np.ndarray], np.ndarray], x: ArrayLike) -> ArrayLike:
        xx = np.asarray(x, dtype=float)
        out = fn(xx)
        if np.isscalar(x) or xx.ndim == 0:
            return float(out)
        return out

    def __call__(self, x: ArrayLike) -> ArrayLike:
        return self._apply(self._value, x)

    @property
    def has_derivative(self) -> bool:
        return self._deriv is not None

    @property
    def has_second_derivative(self) -> bool:
        return self._deriv2 is not None

    def derivative(self, x: ArrayLike) -> ArrayLike:
        if self._deriv is None:
            raise ConfigError(f"profile '{self.name}' has no derivative")
        return self._apply(self._deriv, x)

    def second_derivative(self, x: ArrayLike) -> ArrayLike:
        if self._deriv2 is None:
            raise ConfigError(f"profile '{self.name}' has no second derivative")
        return self._apply(self._deriv2, x)

    def __repr__(self) -> str:
        inner = ",".join(f"{k}={v:g}" for k, v in sorted(self.params.items()))
        return f"Profile({self.name}:{inner})"


def _constant(params: Dict[str, float]) -> Profile:
    c = params["value"]
    return Profile(
        "constant",
        params,
        value=lambda x: np.full_like(x, c),
        deriv=lambda x: np.zeros_like(x),
        deriv2=lambda x: np.zeros_like(x),
    )


def _gaussian(params: Dict[str, float]) -> Profile:
    a, c, w = params["amplitude"], params["center"], params["width"]
    if w <= 0.0:
        raise ConfigError(f"gaussian width must be positive, got {w}")

    def val(x: np.ndarray) -> np.ndarray:
        u = (x - c) / w
        return a * np.exp(-u * u)

    def der(x: np.ndarray) -> np.ndarray:
        u = (x - c) / w
        return a * np.exp(-u * u) * (-2.0 * u) / w

    def der2(x: np.ndarray) -> np.ndarray:
        u = (x - c) / w
        return a * np.exp(-u * u) * (4.0 * u * u - 2.0) / (w * w)

    return Profile("gaussian", params, val, der, der2)


def _cosine(params: Dict[str, float]) -> Profile:
    a, k, c = params["amplitude"], params["freq"], params["center"]
    return Profile(
        "cosine",
        params,
        value=lambda x: a * np.cos(k * (x - c)),
        deriv=lambda x: -a * k * np.sin(k * (x - c)),
        deriv2=lambda x: -a * k * k * np.cos(k * (x - c)),
    )


def _bump(params: Dict[str, float]) -> Profile:
    a, c, w = params["amplitude"], params["center"], params["width"]
    if w <= 0.0:
        raise ConfigError(f"bump width must be positive, got {w}")

    def pieces(x: np.ndarray) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
        u = (x - c) / w
        inside = np.abs(u) < 1.0
        us = np.where(inside, u, 0.0)
        core = np.where(inside, np.exp(1.0 - 1.0 / (1.0 - us * us)), 0.0)
        return u, us, core

    def val(x: np.ndarray) -> np.ndarray:
        _, _, core = pieces(x)
        return a * core

    def der(x: np.ndarray) -> np.ndarray:
        _, us, core = pieces(x)
        q = 1.0 - us * us
        q = np.where(q > 0.0, q, 1.0)
        return a * core * (-2.0 * us / (q * q)) / w

    def der2(x: np.ndarray) -> np.ndarray:
        _, us, core = pieces(x)
        q = 1.0 - us * us
        q = np.where(q > 0.0, q, 1.0)
        u2 = us * us
        poly = 4.0 * u2 / q**4 - 2.0 / q**2 - 8.0 * u2 / q**3
        return a * core * poly / (w * w)

    return Profile("bump", params, val, der, der2)


def _abspow(params: Dict[str, float]) -> Profile:
    a, c, e = params["amplitude"], params["center"], params["exponent"]
    if e <= 0.0:
        raise ConfigError(f"abspow exponent must be positive, got {e}")
    return Profile(
        "abspow",
        params,
        value=lambda x: a * np.abs(x - c) ** e,
    )


# per profile: (defaults in positional order, factory)
_CATALOG: Dict[str, Tuple[Sequence[Tuple[str, float]], Callable[[Dict[str, float]], Profile]]] = {
    "constant": ((("value", 1.0),), _constant),
    "gaussian": ((("amplitude", 1.0), ("center", 0.0), ("width", 1.0)), _gaussian),
    "cosine": ((("amplitude", 1.0), ("freq", 1.0), ("center", 0.0)), _cosine),
    "bump": ((("amplitude", 1.0), ("center", 0.0), ("width", 1.0)), _bump),
    "abspow": ((("amplitude", 1.0), ("center", 0.0), ("exponent", 0.5)), _abspow),
}


def profile_names() -> Tuple[str, ...]:
    return tuple(sorted(_CATALOG))


def make_profile(text: str) -> Profile:
    """Build a profile from `name` or `name:arg,...,key=value,...`."""
    head, _, rest = text.partition(":")
    name = head.strip()
    if name not in _CATALOG:
        raise ConfigError(
            f"unknown profile '{name}'; available: {', '.join(profile_names())}"
        )
    order, factory = _CATALOG[name]
    params = {k: v for k, v in order}
    seen_named = False
    pos = 0
    if rest.strip():
        for item in rest.split(","):
            item = item.strip()
            if not item:
                raise ConfigError(f"empty parameter in profile '{text}'")
            key, eq, raw = item.partition("=")
            if eq:
                seen_named = True
                key = key.strip()
                if key not in params:
                    raise ConfigError(
                        f"unknown parameter '{key}' for profile '{name}'; "
                        f"expected one of: {', '.join(k for k, _ in order)}"
                    )
                params[key] = _parse_number(raw, text)
            else:
                if seen_named:
                    raise ConfigError(
                        f"positional parameter after named one in profile '{text}'"
                    )
                if pos >= len(order):
                    raise ConfigError(f"too many parameters for profile '{name}'")
                params[order[pos][0]] = _parse_number(item, text)
                pos += 1
    return factory(params)


def _parse_number(raw: str, context: str) -> float:
    try:
        return float(raw)
    except ValueError as exc:
        raise ConfigError(f"bad numeric value '{raw.strip()}' in profile '{context}'") from exc


def random_bump(rng: np.random.Generator, dom: Domain, n: int) -> GridFunction:
    """Random smooth bump (sometimes a superposition of two) compactly
    supported inside Omega, sampled on the grid."""
    mid = 0.5 * (dom.omega_lo + dom.omega_hi)
    half = 0.5 * dom.omega_measure

    def draw() -> Profile:
        width = rng.uniform(0.2, 0.5) * half
        c_max = 0.95 * half - width
        center = mid + rng.uniform(-c_max, c_max)
        amp = rng.uniform(0.5, 2.0) * (1.0 if rng.random() < 0.5 else -1.0)
        return make_profile(f"bump:amplitude={amp},center={center},width={width}")

    first = draw()
    if rng.random() < 0.3:
        second = draw()
        return sample(dom, n, lambda x: first(x) + 0.5 * second(x))
    return sample(dom, n, first)
