"""Subordination left-hand sides and the forward coefficient map.

:func:`build_lhs` expands the defining quotient of the subclass with the
series engine alone. :func:`closed_form_lhs_coeffs` gives the hand-expanded
coefficients the engine is checked against, and :func:`solve_forward` /
:func:`hankel_expression` turn a sampled parameter-box point into
``(a2, a3, a4)`` and ``a2 a4 - a3**2``.

Two printed hand expansions carry algebra slips that the engine exposes:
the ``a2 a3`` coefficient at ``z**3`` halves the ``(lambda-1)[3]_q`` term,
and the ``a4`` relation that inherits it also scales the ``a2 (a2**2 - a3)``
term by ``1/[4]_q``. The ``a4`` relation is further built on a third-order
``phi(u(z))`` coefficient whose ``E2`` term is halved (``E2 c1 (c2 - c1**2/2) / 4``
instead of ``/ 2``). ``variant="printed"`` reproduces the expansions as
published (the Hankel bound is derived from them); ``variant="engine"``
uses the corrected coefficients.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .carath import GSSample, gs_reconstruct
from .errors import DomainError, InvariantError, NotNormalizedError
from .phis import PhiSpec
from .pseries import TruncatedSeries, odd_part, pow_real, sym_q_derivative
from .qkernel import ClassParams

__all__ = [
    "QConstants",
    "CandidateCoeffs",
    "bernardi_transform",
    "build_lhs",
    "closed_form_lhs_coeffs",
    "inverse_coeffs",
    "a2a3_coefficient",
    "solve_forward",
    "forward_arrays",
    "hankel_expression",
    "hankel_arrays",
]

VARIANTS = ("printed", "engine")


@dataclass(frozen=True)
class QConstants:
    """q-numbers, Bernardi multipliers and the ``mu`` mixing factors of one parameter set."""

    lam: float
    mu: float
    B2: float
    B3: float
    B4: float
    L2: float
    L3: float

    @classmethod
    def of(cls, params: ClassParams) -> "QConstants":
        return cls(params.lam, params.mu, params.qn(2), params.qn(3), params.qn(4),
                   params.L(2), params.L(3))

    @property
    def m2(self) -> float:
        return self.mu - (self.mu - 1) * self.B2

    @property
    def m3(self) -> float:
        return self.mu - (self.mu - 1) * self.B3

    @property
    def m22(self) -> float:
        return self.mu - (self.mu - 1) * self.B2 ** 2

    @property
    def D3(self) -> float:
        """``lambda [3]_q - 1``; positive for every admissible parameter set."""
        return self.lam * self.B3 - 1


def _require_reduced(params: ClassParams) -> None:
    if not params.is_reduced:
        raise DomainError("this operation needs mu = 1 with the Bernardi operator off")


def _check_variant(variant: str) -> None:
    if variant not in VARIANTS:
        raise ValueError(f"variant must be one of {VARIANTS}, got {variant!r}")


# ---------------------------------------------------------------------------
# series-engine side


def bernardi_transform(f: TruncatedSeries, params: ClassParams) -> TruncatedSeries:
    c = f.coeffs.copy()
    for n in range(2, len(c)):
        c[n] *= params.L(n)
    return TruncatedSeries(c)


def _power(s: TruncatedSeries, alpha: float) -> TruncatedSeries:
    """Real power of a bracket whose constant term is real and positive."""
    c0 = s.coeffs[0]
    if c0.imag != 0 or not c0.real > 0:
        raise InvariantError(f"bracket constant term {c0} is not positive real")
    if alpha == 0:
        return TruncatedSeries.constant(1.0, s.order)
    unit = np.array(s.coeffs / c0)
    unit[0] = 1.0
    return pow_real(TruncatedSeries(unit), alpha) * (c0.real ** alpha)


def build_lhs(f: TruncatedSeries, params: ClassParams) -> TruncatedSeries:
    """Expand the defining quotient of the subclass for a normalized ``f``.

    The result has order ``f.order - 1`` and constant term 1.
    """
    if f.order < 4:
        raise NotNormalizedError("need order >= 4 to reach the a4 coefficient")
    if f.coeffs[0] != 0 or f.coeffs[1] != 1:
        raise NotNormalizedError("series must satisfy f(0) = 0 and f'(0) = 1")
    q, lam, mu = params.q, params.lam, params.mu
    Jf = bernardi_transform(f, params)
    odd = odd_part(Jf)
    D = sym_q_derivative(Jf, q)

    first = 2 * _power(D, lam) / odd.shift_down()
    lhs = _power(first, mu)
    if mu != 1:
        second = 2 * _power(sym_q_derivative(D.shift_up(), q), lam) / sym_q_derivative(odd, q)
        lhs = lhs * _power(second, 1 - mu)
    if abs(lhs.coeffs[0] - 1) > 1e-12:
        raise InvariantError("left-hand side lost its unit constant term")
    return lhs


def inverse_coeffs(a2, a3, a4):
    """Coefficients ``w**2 .. w**4`` of the inverse of ``z + a2 z**2 + a3 z**3 + a4 z**4``."""
    return -a2, 2 * a2 * a2 - a3, -(5 * a2 ** 3 - 5 * a2 * a3 + a4)


def a2a3_coefficient(params: ClassParams, variant: str = "printed") -> float:
    """Coefficient of ``a2 a3`` at ``z**3`` in the reduced left-hand side."""
    _check_variant(variant)
    k = QConstants.of(params)
    lam = k.lam
    inner = (lam - 1) / 2 * k.B3 if variant == "printed" else (lam - 1) * k.B3
    return lam * (inner - 1) * k.B2


def closed_form_lhs_coeffs(params: ClassParams, a2, a3, a4=0.0, variant: str = "printed") -> list:
    """Hand-expanded left-hand-side coefficients.

    Reduced subclass (``mu = 1``, no Bernardi): the ``z, z**2, z**3``
    coefficients. Otherwise: the ``z, z**2`` coefficients of the general
    class, the only ones available in closed form.
    """
    k = QConstants.of(params)
    lam = k.lam
    if params.is_reduced:
        return [
            lam * k.B2 * a2,
            k.D3 * a3 + lam * (lam - 1) / 2 * k.B2 ** 2 * a2 * a2,
            lam * k.B4 * a4 + a2a3_coefficient(params, variant) * a2 * a3
            + lam * (lam - 1) * (lam - 2) / 6 * k.B2 ** 3 * a2 ** 3,
        ]
    return [
        lam * k.m2 * k.B2 * k.L2 * a2,
        k.D3 * k.m3 * k.L3 * a3
        + lam / 2 * (lam * k.m2 ** 2 - k.m22) * k.B2 ** 2 * k.L2 ** 2 * a2 * a2,
    ]


# ---------------------------------------------------------------------------
# forward map over the parameter box


@dataclass(frozen=True)
class CandidateCoeffs:
    a2: complex
    a3: complex
    a4: complex
    sample: GSSample
    phi: PhiSpec
    variant: str = "printed"
    extra: dict = field(default_factory=dict, compare=False)

    @property
    def hankel(self) -> complex:
        return self.a2 * self.a4 - self.a3 ** 2


def forward_arrays(phi: PhiSpec, params: ClassParams, c1, x, y, sigma, tau,
                   variant: str = "printed"):
    """Vectorized ``(a2, a3, a4)`` for the reduced subclass; arguments broadcast."""
    _require_reduced(params)
    _check_variant(variant)
    k = QConstants.of(params)
    lam, B2, B4 = k.lam, k.B2, k.B4
    E1, E2, E3 = phi.E1, phi.E2, phi.E3
    c1 = np.asarray(c1, dtype=float)
    c2, c3 = gs_reconstruct(c1, np.asarray(x, dtype=complex), np.asarray(sigma, dtype=complex))
    d2, d3 = gs_reconstruct(-c1, np.asarray(y, dtype=complex), np.asarray(tau, dtype=complex))

    a2 = E1 * c1 / (2 * lam * B2)
    a3 = E1 * (c2 - d2) / (4 * k.D3) + E1 ** 2 * c1 ** 2 / (4 * lam ** 2 * B2 ** 2)
    cubic = lam * (lam - 1) * (lam - 2) / 6 * B2 ** 3
    if variant == "printed":
        driven = (E1 / (4 * lam * B4) * (c3 - d3)
                  + c1 / (8 * lam * B4) * (E2 - 2 * E1) * (c2 + d2)
                  + c1 ** 3 / (8 * lam * B4) * (E1 - E2 + E3))
        a4 = (driven - 5 / (2 * B4) * a2 * (a2 * a2 - a3)
              - B2 / (6 * B4) * ((lam - 1) * (3 * k.B3 + (lam - 2) * B2 ** 2) - 6) * a2 ** 3)
    else:
        # half the difference of the two third-order relations, divided by lambda [4]_q
        driven = (E1 / (4 * lam * B4) * (c3 - d3)
                  + c1 / (4 * lam * B4) * (E2 - E1) * (c2 + d2)
                  + c1 ** 3 / (8 * lam * B4) * (E1 - 2 * E2 + E3))
        cross = a2a3_coefficient(params, "engine")
        a4 = driven - 2.5 * a2 * (a2 * a2 - a3) - (cross + cubic) / (lam * B4) * a2 ** 3
    return a2, a3, a4


def solve_forward(phi: PhiSpec, params: ClassParams, sample: GSSample,
                  variant: str = "printed") -> CandidateCoeffs:
    """Coefficients ``(a2, a3, a4)`` driven by one parameter-box sample."""
    a2, a3, a4 = forward_arrays(phi, params, sample.c1, sample.x, sample.y,
                                sample.sigma, sample.tau, variant)
    return CandidateCoeffs(complex(a2), complex(a3), complex(a4), sample, phi, variant)


def hankel_arrays(phi: PhiSpec, params: ClassParams, c1, x, y, sigma, tau):
    """Expanded ``a2 a4 - a3**2`` directly in the box coordinates (vectorized).

    This is the fully substituted polynomial the Hankel bound is derived
    from; it must agree with ``a2 * a4 - a3**2`` of :func:`forward_arrays`
    (printed variant) identically.
    """
    _require_reduced(params)
    k = QConstants.of(params)
    lam, B2, B3, B4, D3 = k.lam, k.B2, k.B3, k.B4, k.D3
    E1, E2, E3 = phi.E1, phi.E2, phi.E3
    c = np.asarray(c1, dtype=float)
    x = np.asarray(x, dtype=complex)
    y = np.asarray(y, dtype=complex)
    w = 4 - c * c
    base = 32 * lam ** 2 * B2 * B4
    quartic = (-E1 * c ** 4 / (96 * lam ** 4 * B2 ** 4 * B4)
               * (E1 ** 3 * ((lam - 1) * (lam - 2) * B2 ** 3 + 3 * (lam - 1) * B2 * B3
                             - 6 * (B2 - B4))
                  - 6 * E3 * lam ** 2 * B2 ** 3))
    return (quartic
            + E1 * E2 * c * c * w * (x + y) / base
            - E1 ** 2 * c * c * w * (x * x + y * y) / base
            + E1 ** 2 * c * w / (16 * lam ** 2 * B2 * B4)
            * ((1 - np.abs(x) ** 2) * sigma - (1 - np.abs(y) ** 2) * tau)
            - E1 ** 2 * w * w * (x - y) ** 2 / (64 * D3 ** 2)
            + (5 - 4 * B4) * E1 ** 3 * c * c * w * (x - y) / (64 * lam ** 2 * B2 ** 2 * B4 * D3))


def hankel_expression(phi: PhiSpec, params: ClassParams, sample: GSSample) -> complex:
    return complex(hankel_arrays(phi, params, sample.c1, sample.x, sample.y,
                                 sample.sigma, sample.tau))
