"""Symmetric q-numbers and generalized Bernardi coefficients."""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import DomainError

__all__ = [
    "ClassParams",
    "check_q",
    "sym_q_number",
    "sym_q_number_sum",
    "bernardi_coeff",
]


def check_q(q: float) -> float:
    q = float(q)
    if not (0.0 < q < 1.0) or math.isnan(q):
        raise DomainError(f"q must lie in the open interval (0, 1), got {q!r}")
    return q


def sym_q_number_sum(n: int, q: float) -> float:
    """Integer symmetric q-number as the finite sum ``sum_k q**(n-1-2k)``."""
    q = check_q(q)
    if n < 0:
        raise DomainError(f"n must be >= 0, got {n}")
    return math.fsum(q ** (n - 1 - 2 * k) for k in range(n))


def sym_q_number(n: float, q: float) -> float:
    """Symmetric q-number ``(q**n - q**-n) / (q - 1/q)``.

    Integer arguments use the finite-sum form, which avoids the cancellation
    of the ratio form as ``q -> 1``; real arguments use the ratio form.

    >>> sym_q_number(2, 0.5)
    2.5
    >>> sym_q_number(3, 0.5)
    5.25
    """
    q = check_q(q)
    if float(n).is_integer():
        if n < 0:
            raise DomainError(f"n must be >= 0, got {n}")
        return sym_q_number_sum(int(n), q)
    # sinh form of the ratio: numerically identical, better conditioned
    lq = math.log(q)
    return math.sinh(n * lq) / math.sinh(lq)


@dataclass(frozen=True)
class ClassParams:
    """Parameters ``(q, lambda, mu, eta)`` selecting one subclass instance.

    ``bernardi`` switches the generalized Bernardi operator on; when it is off
    every multiplier ``L_n`` is exactly 1 and ``eta`` is ignored.
    """

    q: float
    lam: float = 1.0
    mu: float = 1.0
    eta: float = 0.0
    bernardi: bool = False

    def __post_init__(self) -> None:
        check_q(self.q)
        if not self.lam >= 1.0:
            raise DomainError(f"lambda must be >= 1, got {self.lam!r}")
        if not self.mu >= 0.0:
            raise DomainError(f"mu must be >= 0, got {self.mu!r}")
        if not self.eta > -1.0:
            raise DomainError(f"eta must be > -1, got {self.eta!r}")

    @property
    def is_reduced(self) -> bool:
        """True for the mu = 1, Bernardi-free subclass used by the Hankel bound."""
        return self.mu == 1.0 and not self.bernardi

    def qn(self, n: float) -> float:
        return sym_q_number(n, self.q)

    def L(self, n: int) -> float:
        return bernardi_coeff(n, self)

    def to_dict(self) -> dict:
        return {
            "q": self.q,
            "lambda": self.lam,
            "mu": self.mu,
            "eta": self.eta,
            "bernardi": self.bernardi,
        }


def bernardi_coeff(n: int, params: ClassParams) -> float:
    """Multiplier ``L_n = [1+eta]_q / [n+eta]_q`` of the Bernardi operator."""
    if n < 1:
        raise DomainError(f"n must be >= 1, got {n}")
    if n == 1 or not params.bernardi:
        return 1.0
    num = sym_q_number(1.0 + params.eta, params.q)
    den = sym_q_number(n + params.eta, params.q)
    return num / den
