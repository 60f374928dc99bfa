"""Caratheodory-class coefficients and the Grenander-Szego parametrization.

A Caratheodory function ``h = 1 + p1 z + p2 z**2 + ...`` (``Re h > 0``) has
``p2, p3`` determined by ``p1`` and two disk parameters ``x, sigma``. The
verifier samples those parameters directly; :func:`sample_carath` builds
genuine members from finitely atomic Herglotz measures for cross-checks.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import InvalidMeasureError, InvariantError, NotCaratheodoryError
from .pseries import TruncatedSeries

__all__ = [
    "GSSample",
    "CarathCoeffs",
    "Degenerate",
    "gs_reconstruct",
    "gs_extract",
    "sample_carath",
    "schwarz_from_carath",
    "schwarz_closed_form",
]

_DISK_TOL = 1e-12


@dataclass(frozen=True)
class GSSample:
    """One point of the parameter box: ``c1`` real, four disk parameters.

    ``(x, sigma)`` drive the ``c``-side and ``(y, tau)`` the ``d``-side; the
    ``d``-side first coefficient is pinned to ``-c1``.
    """

    c1: float
    x: complex = 0j
    y: complex = 0j
    sigma: complex = 0j
    tau: complex = 0j

    def __post_init__(self) -> None:
        if not (0.0 <= self.c1 <= 2.0):
            raise ValueError(f"c1 must lie in [0, 2], got {self.c1!r}")
        for name in ("x", "y", "sigma", "tau"):
            if abs(getattr(self, name)) > 1.0 + _DISK_TOL:
                raise ValueError(f"|{name}| must be <= 1")

    @property
    def d1(self) -> float:
        return -self.c1

    def c_side(self) -> "CarathCoeffs":
        p2, p3 = gs_reconstruct(self.c1, self.x, self.sigma)
        return CarathCoeffs(complex(self.c1), p2, p3)

    def d_side(self) -> "CarathCoeffs":
        p2, p3 = gs_reconstruct(self.d1, self.y, self.tau)
        return CarathCoeffs(complex(self.d1), p2, p3)

    def to_dict(self) -> dict:
        return {
            "c1": self.c1,
            "x": [self.x.real, self.x.imag],
            "y": [self.y.real, self.y.imag],
            "sigma": [self.sigma.real, self.sigma.imag],
            "tau": [self.tau.real, self.tau.imag],
        }


@dataclass(frozen=True)
class CarathCoeffs:
    p1: complex
    p2: complex
    p3: complex

    def as_tuple(self) -> tuple[complex, complex, complex]:
        return (self.p1, self.p2, self.p3)


@dataclass(frozen=True)
class Degenerate:
    """Marker for a parameter that the coefficients leave unconstrained.

    ``free == "x"`` when ``4 - p1**2 = 0``; ``free == "sigma"`` when
    ``|x| = 1`` (``x`` is then reported).
    """

    free: str
    x: complex | None = None


def gs_reconstruct(p1, x, sigma):
    """``(p2, p3)`` from ``p1`` and disk parameters; accepts numpy arrays."""
    w = 4 - p1 * p1
    p2 = (p1 * p1 + x * w) / 2
    p3 = (p1 ** 3 + 2 * p1 * w * x - p1 * w * x * x
          + 2 * w * (1 - np.abs(x) ** 2) * sigma) / 4
    return p2, p3


def gs_extract(p: CarathCoeffs, tol: float = 1e-9):
    """Invert :func:`gs_reconstruct`; returns ``(x, sigma)`` or :class:`Degenerate`."""
    p1, p2, p3 = p.as_tuple()
    w = 4 - p1 * p1
    if abs(w) <= tol:
        return Degenerate("x")
    x = (2 * p2 - p1 * p1) / w
    if abs(x) > 1 + 1e-6:
        raise NotCaratheodoryError(f"|x| = {abs(x):.12g} exceeds 1")
    rim = 1 - abs(x) ** 2
    if rim <= tol:
        return Degenerate("sigma", x)
    sigma = (4 * p3 - p1 ** 3 - 2 * p1 * w * x + p1 * w * x * x) / (2 * w * rim)
    if abs(sigma) > 1 + 1e-6:
        raise NotCaratheodoryError(f"|sigma| = {abs(sigma):.12g} exceeds 1")
    return x, sigma


def sample_carath(weights: Sequence[float], angles: Sequence[float]) -> CarathCoeffs:
    """Coefficients of ``sum_j w_j (1 + e^{i t_j} z) / (1 - e^{i t_j} z)``.

    ``p_n = 2 sum_j w_j e^{i n t_j}``; every such function is a genuine
    Caratheodory member.
    """
    w = np.asarray(weights, dtype=float)
    t = np.asarray(angles, dtype=float)
    if w.shape != t.shape or w.ndim != 1 or len(w) == 0:
        raise InvalidMeasureError("weights and angles must be equal-length, nonempty")
    if np.any(w < 0) or not math.isclose(w.sum(), 1.0, abs_tol=1e-12):
        raise InvalidMeasureError("weights must be nonnegative and sum to 1")
    p = [complex(2 * np.sum(w * np.exp(1j * n * t))) for n in (1, 2, 3)]
    return CarathCoeffs(*p)


def schwarz_closed_form(p: CarathCoeffs) -> tuple[complex, complex, complex]:
    c1, c2, c3 = p.as_tuple()
    return (c1 / 2, (c2 - c1 * c1 / 2) / 2, (c3 - c1 * c2 + c1 ** 3 / 4) / 2)


def schwarz_from_carath(p: CarathCoeffs) -> TruncatedSeries:
    """Schwarz function ``u = (h - 1) / (h + 1)`` through ``z**3``."""
    h = TruncatedSeries([1.0, *p.as_tuple()])
    u = (h - 1) / (h + 1)
    closed = schwarz_closed_form(p)
    for k in (1, 2, 3):
        if abs(u.coeffs[k] - closed[k - 1]) > 1e-12 * max(1.0, abs(closed[k - 1])):
            raise InvariantError(f"Schwarz coefficient {k} disagrees with its closed form")
    return u
