"""Ma-Minda majorants ``phi(z) = 1 + E1 z + E2 z**2 + E3 z**3 + ...``."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .errors import InvalidPhiError
from .pseries import DEFAULT_ORDER, TruncatedSeries, pow_real

__all__ = ["PhiSpec", "make_phi", "parse_phi", "caratheodory", "janowski", "crescent", "custom"]


@dataclass(frozen=True)
class PhiSpec:
    E1: float
    E2: float
    E3: float
    label: str
    full_series: TruncatedSeries | None = field(default=None, compare=False, repr=False)

    def __post_init__(self) -> None:
        if not self.E1 > 0:
            raise InvalidPhiError(f"E1 must be positive, got {self.E1!r}")
        if self.full_series is not None:
            s = self.full_series.coeffs
            if s[0] != 1:
                raise InvalidPhiError("phi series must have constant term 1")
            for k, e in enumerate((self.E1, self.E2, self.E3), start=1):
                if abs(s[k] - e) > 1e-12:
                    raise InvalidPhiError(f"series coefficient {k} disagrees with E{k}")

    def to_dict(self) -> dict:
        return {"label": self.label, "E1": self.E1, "E2": self.E2, "E3": self.E3}

    def evaluate(self, z: complex) -> complex:
        """Closed-form value of phi, for presets that have one."""
        kind, _, args = self.label.partition(":")
        if kind == "caratheodory":
            return (1 + z) / (1 - z)
        if kind == "janowski":
            A, B = (float(v) for v in args.split(","))
            return (1 + A * z) / (1 + B * z)
        if kind == "crescent":
            return z + (1 + z * z) ** 0.5
        raise InvalidPhiError(f"no closed form for {self.label!r}")


def _from_series(series: TruncatedSeries, label: str) -> PhiSpec:
    c = series.coeffs
    return PhiSpec(float(c[1].real), float(c[2].real), float(c[3].real), label, series)


def caratheodory(order: int = DEFAULT_ORDER) -> PhiSpec:
    z = TruncatedSeries.identity(order)
    return _from_series((1 + z) / (1 - z), "caratheodory")


def janowski(A: float, B: float, order: int = DEFAULT_ORDER) -> PhiSpec:
    if not (-1.0 <= B < A <= 1.0):
        raise InvalidPhiError(f"janowski needs -1 <= B < A <= 1, got A={A}, B={B}")
    z = TruncatedSeries.identity(order)
    return _from_series((1 + A * z) / (1 + B * z), f"janowski:{A!r},{B!r}")


def crescent(order: int = DEFAULT_ORDER) -> PhiSpec:
    z = TruncatedSeries.identity(order)
    return _from_series(z + pow_real(1 + z * z, 0.5), "crescent")


def custom(E1: float, E2: float, E3: float) -> PhiSpec:
    return PhiSpec(float(E1), float(E2), float(E3), f"custom:{E1!r},{E2!r},{E3!r}")


def make_phi(preset: str, *args: float, order: int = DEFAULT_ORDER) -> PhiSpec:
    """Build a preset by name: ``caratheodory``, ``janowski``, ``crescent`` or ``custom``."""
    if preset == "caratheodory":
        return caratheodory(order)
    if preset == "janowski":
        return janowski(*args, order=order)
    if preset == "crescent":
        return crescent(order)
    if preset == "custom":
        return custom(*args)
    raise InvalidPhiError(f"unknown phi preset {preset!r}")


def parse_phi(text: str, order: int = DEFAULT_ORDER) -> PhiSpec:
    """Parse ``caratheodory | janowski:A,B | crescent | custom:E1,E2,E3``."""
    name, _, rest = text.strip().partition(":")
    expected = {"caratheodory": 0, "crescent": 0, "janowski": 2, "custom": 3}
    if name not in expected:
        raise InvalidPhiError(f"unknown phi preset {name!r}")
    try:
        args = [float(v) for v in rest.split(",")] if rest else []
    except ValueError:
        raise InvalidPhiError(f"cannot parse phi arguments in {text!r}") from None
    if len(args) != expected[name] or not all(math.isfinite(a) for a in args):
        raise InvalidPhiError(f"{name} takes {expected[name]} finite arguments, got {text!r}")
    return make_phi(name, *args, order=order)
