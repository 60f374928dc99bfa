"""Closed-form coefficient, Hankel and Fekete-Szego bounds.

Hankel bound: ``|a2 a4 - a3**2| <= max_{0 <= t <= 4} P t**2 + Q t + R`` where
``P, Q, R`` come from the proof chain (``variant="proof"``). The theorem's
displayed block prints different ``P``, ``Q`` and a different first-case value;
those are computed under ``variant="theorem-statement"`` for comparison only.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .classdef import QConstants
from .errors import UndefinedBoundError
from .phis import PhiSpec
from .qkernel import ClassParams, sym_q_number

__all__ = [
    "HankelBoundParts",
    "ThetaOmega",
    "CoeffBounds",
    "quad_max",
    "printed_case_table",
    "thm1_parts",
    "thm1_bound",
    "theta_omega",
    "thm2_bounds",
    "fekete_branches",
    "thm3_bound",
    "corollary1",
    "corollary2",
    "corollary3",
    "corollary4",
    "corollary5",
]

PROOF = "proof"
STATEMENT = "theorem-statement"


def quad_max(P: float, Q: float, R: float, lo: float = 0.0, hi: float = 4.0) -> float:
    """Exact maximum of ``P t**2 + Q t + R`` over ``[lo, hi]``."""
    best = max(R + lo * (Q + lo * P), R + hi * (Q + hi * P))
    if P < 0:
        t = -Q / (2 * P)
        if lo < t < hi:
            best = max(best, R - Q * Q / (4 * P))
    return best


@dataclass(frozen=True)
class HankelBoundParts:
    P: float
    Q: float
    R: float
    variant: str
    first_case: float  # value the printed case table reports in its first case

    def __post_init__(self) -> None:
        if not self.R > 0:
            raise UndefinedBoundError("R must be positive")

    def to_dict(self) -> dict:
        return {"P": self.P, "Q": self.Q, "R": self.R, "variant": self.variant,
                "first_case": self.first_case}


def thm1_parts(lam: float, q: float, phi: PhiSpec, variant: str = PROOF) -> HankelBoundParts:
    """Quadratic coefficients of the Hankel bound, as printed in the chosen block."""
    k = QConstants.of(ClassParams(q=q, lam=lam))
    B2, B3, B4, D3 = k.B2, k.B3, k.B4, k.D3
    E1, E2, E3 = phi.E1, phi.E2, phi.E3
    R = E1 ** 2 / D3 ** 2
    if variant == PROOF:
        bracket = (E1 ** 3 * ((lam - 1) * abs(lam - 2) * B2 ** 3 + 3 * (lam - 1) * B2 * B3
                              + 6 * (B4 - B2))
                   + 6 * (abs(E3) - E1 - abs(E2)) * lam ** 2 * B2 ** 3
                   - 3 * abs(5 - 4 * B4) * E1 ** 2 * lam ** 2 * B2 ** 2 / D3
                   + 6 * E1 * lam ** 4 * B2 ** 4 * B4 / D3 ** 2)
        P = E1 / (96 * lam ** 4 * B2 ** 4 * B4) * bracket
        Q = (E1 * (E1 + abs(E2)) / (4 * lam ** 2 * B2 * B4)
             + abs(5 - 4 * B4) * E1 ** 3 / (8 * lam ** 2 * B2 ** 2 * B4 * D3)
             - E1 ** 2 / (2 * D3 ** 2))
        return HankelBoundParts(P, Q, R, PROOF, R)
    if variant == STATEMENT:
        bracket = (6 * (abs(E1 - E2 + E3) - 2 * E1) * lam ** 3 * B2 ** 3
                   + E1 ** 3 * (lam * (lam - 1) * abs(lam - 2) * B2 ** 3
                                + 3 * lam * (lam - 1) * B2 * B3
                                + 6 * lam * (B4 - B2) + 15 * (lam - 1)))
        P = bracket * E1 / (96 * lam ** 5 * B2 ** 4 * B4)
        Q = (E1 * (5 * E1 + 2 * abs(2 * E1 - E2)) / (8 * lam ** 2 * B2 * B4)
             + 5 * E1 ** 2 / (4 * lam ** 3 * B4 * B2 ** 2 * D3)
             + E1 ** 3 / (2 * lam ** 2 * (3 * B3 - 1) * B2))
        return HankelBoundParts(P, Q, R, STATEMENT, E1 ** 2 / (3 * lam - 1) ** 2)
    raise ValueError(f"unknown variant {variant!r}")


def printed_case_table(parts: HankelBoundParts) -> tuple[int | None, float | None, float]:
    """Evaluate the three-case table exactly as printed.

    Returns ``(case, value, third_case_formula)``: the first case whose
    printed condition holds (``None`` when no condition holds) with its
    printed value, plus the printed third-case expression evaluated
    unconditionally so it can be compared with the true vertex value.
    """
    P, Q, R = parts.P, parts.Q, parts.R
    third = (4 * P * Q - Q * Q) / (4 * P) if P != 0 else math.nan
    if Q <= 0 and P <= -Q / 4:
        return 1, parts.first_case, third
    if (Q >= 0 and P >= -Q / 8) or (Q <= 0 and P >= -Q / 4):
        return 2, 16 * P + 4 * Q + R, third
    if Q >= 0 and P >= -Q / 8:  # unreachable: same condition as case 2
        return 3, third, third
    return None, None, third


def thm1_bound(lam: float, q: float, phi: PhiSpec) -> float:
    p = thm1_parts(lam, q, phi, PROOF)
    return quad_max(p.P, p.Q, p.R)


# ---------------------------------------------------------------------------
# general class: a2, a3 and Fekete-Szego


@dataclass(frozen=True)
class ThetaOmega:
    Omega: float
    Theta: float

    @property
    def flags(self) -> list[str]:
        out = []
        if self.Omega == 0:
            out.append("omega-zero")
        if self.Theta == 0:
            out.append("theta-zero")
        return out


def theta_omega(params: ClassParams, phi: PhiSpec) -> ThetaOmega:
    k = QConstants.of(params)
    lam, E1, E2 = k.lam, phi.E1, phi.E2
    head = 2 * k.D3 * k.m3 * k.L3
    sq = k.B2 ** 2 * k.L2 ** 2
    omega = head + lam * (lam * k.m2 ** 2 - k.m22) * sq
    theta = (head * E1 ** 2
             + lam * (lam * k.m2 ** 2 * (E1 ** 2 + 2 * E1 - 2 * E2) - k.m22 * E1 ** 2) * sq)
    return ThetaOmega(omega, theta)


@dataclass
class CoeffBounds:
    a2_bound: float
    a3_bound: float
    theta_omega: ThetaOmega
    a2_entries: dict[str, float]
    a3_head: float
    a3_entries: dict[str, float]
    flags: list[str] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "a2_bound": self.a2_bound,
            "a3_bound": self.a3_bound,
            "Omega": self.theta_omega.Omega,
            "Theta": self.theta_omega.Theta,
            "a2_entries": dict(self.a2_entries),
            "a3_head": self.a3_head,
            "a3_entries": dict(self.a3_entries),
            "flags": list(self.flags),
        }


def _safe_div(num: float, den: float) -> float:
    return num / den if den != 0 else math.inf


def thm2_bounds(params: ClassParams, phi: PhiSpec) -> CoeffBounds:
    """Bounds on ``|a2|`` and ``|a3|``; each is a min over available entries.

    The mismatched bars ``|2(E2-E1|+E1)`` are read as ``2(|E2-E1| + E1)``.
    Entries with a vanishing denominator are dropped and flagged.
    """
    k = QConstants.of(params)
    lam, E1, E2 = k.lam, phi.E1, phi.E2
    to = theta_omega(params, phi)
    flags = list(to.flags)
    spread = 2 * (abs(E2 - E1) + E1)
    lin_den = lam * abs(k.m2 * k.L2) * k.B2
    if lin_den == 0:
        flags.append("m2-degenerate")

    a2 = {
        "linear": _safe_div(E1, lin_den),
        "omega": math.sqrt(_safe_div(spread, abs(to.Omega))),
        "theta": _safe_div(E1 * math.sqrt(2 * E1), math.sqrt(abs(to.Theta))),
    }
    head_den = k.D3 * abs(k.m3 * k.L3)
    if head_den == 0:
        flags.append("m3-degenerate")
    a3_head = _safe_div(E1, head_den)
    a3 = {
        "square": _safe_div(E1 ** 2, lam ** 2 * k.m2 ** 2 * k.B2 ** 2 * abs(k.L2) ** 2),
        "omega": _safe_div(spread, abs(to.Omega)),
    }
    a2 = {n: v for n, v in a2.items() if math.isfinite(v)}
    a3 = {n: v for n, v in a3.items() if math.isfinite(v)}
    a2_bound = min(a2.values()) if a2 else math.inf
    a3_bound = a3_head + min(a3.values()) if a3 else math.inf
    return CoeffBounds(a2_bound, a3_bound, to, a2, a3_head, a3, flags)


def fekete_branches(params: ClassParams, phi: PhiSpec, rho: float, power: int = 3) -> dict:
    """Both branches of the Fekete-Szego bound and the branch selector.

    ``power`` is the exponent of ``E1`` in the second branch; 3 is the
    consistent value, 2 reproduces the form the proof concludes with.
    """
    k = QConstants.of(params)
    E1 = phi.E1
    theta = theta_omega(params, phi).Theta
    if theta == 0:
        raise UndefinedBoundError("Theta vanishes; the Fekete-Szego bound is undefined")
    mix = k.m3 * k.L3
    if mix == 0:
        raise UndefinedBoundError("[mu - (mu-1)[3]_q] L3 vanishes")
    lhs = 2 * abs((1 - rho) * mix) * E1 ** 2 * k.D3
    first = E1 / (k.D3 * abs(mix))
    second = 2 * abs(1 - rho) * E1 ** power / abs(theta)
    return {"condition_lhs": lhs, "abs_theta": abs(theta), "first": first,
            "second": second, "branch": 1 if lhs <= abs(theta) else 2}


def thm3_bound(params: ClassParams, phi: PhiSpec, rho: float) -> float:
    b = fekete_branches(params, phi, rho)
    return b["first"] if b["branch"] == 1 else b["second"]


# ---------------------------------------------------------------------------
# corollaries, transcribed independently of the general formulas


def _qL(params: ClassParams):
    q = params.q
    return (params.lam, sym_q_number(2, q), sym_q_number(3, q), params.L(2), params.L(3))


def corollary1(params: ClassParams, phi: PhiSpec) -> dict:
    """Starlike-type specialisation (``mu = 1``) with ``Gamma`` and ``Xi``."""
    lam, B2, B3, L2, L3 = _qL(params)
    E1, E2 = phi.E1, phi.E2
    gamma = 2 * (lam * B3 - 1) * L3 + lam * (lam - 1) * B2 ** 2 * L2 ** 2
    xi = (2 * (lam * B3 - 1) * E1 ** 2 * L3
          + lam * ((lam - 1) * E1 ** 2 + 2 * lam * (E1 - E2)) * B2 ** 2 * L2 ** 2)
    spread = 2 * (abs(E2 - E1) + E1)
    a2 = min(E1 / (lam * abs(L2) * B2), math.sqrt(spread / abs(gamma)),
             E1 * math.sqrt(2 * E1) / math.sqrt(abs(xi)))
    a3 = (E1 / ((lam * B3 - 1) * abs(L3))
          + min(E1 ** 2 / (lam ** 2 * B2 ** 2 * abs(L2) ** 2), spread / abs(gamma)))
    return {"Gamma": gamma, "Xi": xi, "a2_bound": a2, "a3_bound": a3}


def _upsilon(params: ClassParams, phi: PhiSpec, printed: bool) -> float:
    lam, B2, B3, L2, L3 = _qL(params)
    E1, E2 = phi.E1, phi.E2
    factor = lam if printed else 2 * lam
    return (2 * (lam * B3 - 1) * B3 * E1 ** 2 * L3
            + lam * ((lam - 1) * E1 ** 2 + factor * (E1 - E2)) * B2 ** 4 * L2 ** 2)


def corollary2(params: ClassParams, phi: PhiSpec) -> dict:
    """Convex-type specialisation (``mu = 0``) with ``Psi`` and ``Upsilon``."""
    lam, B2, B3, L2, L3 = _qL(params)
    E1, E2 = phi.E1, phi.E2
    psi = 2 * (lam * B3 - 1) * B3 * L3 + lam * (lam - 1) * B2 ** 4 * L2 ** 2
    ups = _upsilon(params, phi, printed=False)
    spread = 2 * (abs(E2 - E1) + E1)
    a2 = min(E1 / (lam * abs(L2) * B2 ** 2), math.sqrt(spread / abs(psi)),
             E1 * math.sqrt(2 * E1) / math.sqrt(abs(ups)))
    a3 = (E1 / ((lam * B3 - 1) * B3 * abs(L3))
          + min(E1 ** 2 / (lam ** 2 * B2 ** 4 * abs(L2) ** 2), spread / abs(psi)))
    return {"Psi": psi, "Upsilon": ups, "a2_bound": a2, "a3_bound": a3}


def corollary3(params: ClassParams, phi: PhiSpec, rho: float) -> float:
    lam, B2, B3, L2, L3 = _qL(params)
    E1 = phi.E1
    xi = corollary1(params, phi)["Xi"]
    if 2 * abs((1 - rho) * L3) * E1 ** 2 * (lam * B3 - 1) <= abs(xi):
        return E1 / ((lam * B3 - 1) * abs(L3))
    return 2 * abs(1 - rho) * E1 ** 3 / abs(xi)


def corollary4(params: ClassParams, phi: PhiSpec, rho: float, printed: bool = False) -> float:
    """``printed=True`` uses the displayed ``Upsilon`` with ``lambda (E1 - E2)``."""
    lam, B2, B3, L2, L3 = _qL(params)
    E1 = phi.E1
    ups = _upsilon(params, phi, printed)
    if 2 * abs((1 - rho) * L3) * E1 ** 2 * (lam * B3 - 1) * B3 <= abs(ups):
        return E1 / ((lam * B3 - 1) * B3 * abs(L3))
    return 2 * abs(1 - rho) * E1 ** 3 / abs(ups)


def corollary5(params: ClassParams, phi: PhiSpec) -> float:
    k = QConstants.of(params)
    return phi.E1 / (k.D3 * abs(k.m3 * k.L3))
