"""Truncated complex power series.

A :class:`TruncatedSeries` of order ``N`` stores ``c_0 .. c_N``; everything
above ``z**N`` is unknown (not zero). Binary operations carry the smaller of
the two operand orders, so no result ever reports a coefficient that its
inputs did not determine.

>>> x = TruncatedSeries.identity(3)
>>> (1 / (1 - x)).coeffs.real.tolist()
[1.0, 1.0, 1.0, 1.0]
"""

from __future__ import annotations

from numbers import Number
from typing import Iterable, Sequence

import numpy as np

from .errors import (
    BranchError,
    CompositionDomainError,
    NotNormalizedError,
    SingularDivisorError,
)
from .qkernel import check_q, sym_q_number

__all__ = [
    "DEFAULT_ORDER",
    "TruncatedSeries",
    "ring_op",
    "compose",
    "comp_inverse",
    "pow_real",
    "sym_q_derivative",
    "odd_part",
]

DEFAULT_ORDER = 6


class TruncatedSeries:
    """Immutable truncated power series with complex coefficients."""

    __slots__ = ("_c",)
    __array_priority__ = 100  # numpy scalars defer to our reflected operators

    def __init__(self, coeffs: Iterable[complex], order: int | None = None):
        c = np.array(list(coeffs) if not isinstance(coeffs, np.ndarray) else coeffs,
                     dtype=complex).ravel()
        if order is None:
            order = len(c) - 1
        if order < 0:
            raise ValueError("a series needs at least one coefficient")
        if len(c) < order + 1:
            c = np.concatenate([c, np.zeros(order + 1 - len(c), dtype=complex)])
        c = c[: order + 1].copy()
        c.flags.writeable = False
        self._c = c

    # -- constructors ------------------------------------------------------
    @classmethod
    def constant(cls, value: complex, order: int = DEFAULT_ORDER) -> "TruncatedSeries":
        return cls([value], order)

    @classmethod
    def identity(cls, order: int = DEFAULT_ORDER) -> "TruncatedSeries":
        return cls([0.0, 1.0], order)

    @classmethod
    def from_normalized(cls, a: Sequence[complex], order: int = DEFAULT_ORDER) -> "TruncatedSeries":
        """``z + a[0] z**2 + a[1] z**3 + ...`` (pass ``[a2, a3, a4]``)."""
        return cls([0.0, 1.0, *a], order)

    # -- accessors ---------------------------------------------------------
    @property
    def coeffs(self) -> np.ndarray:
        return self._c

    @property
    def order(self) -> int:
        return len(self._c) - 1

    def __getitem__(self, n: int) -> complex:
        if n > self.order:
            raise IndexError(f"coefficient {n} is beyond the carried order {self.order}")
        return complex(self._c[n])

    def __len__(self) -> int:
        return len(self._c)

    def __repr__(self) -> str:
        return f"TruncatedSeries({self._c.tolist()!r}, order={self.order})"

    def truncate(self, order: int) -> "TruncatedSeries":
        if order > self.order:
            raise ValueError(f"cannot extend order {self.order} to {order}")
        return TruncatedSeries(self._c, order)

    def __call__(self, z):
        """Evaluate the truncated polynomial at ``z`` (scalar or array)."""
        z = np.asarray(z, dtype=complex)
        out = np.zeros_like(z)
        for c in self._c[::-1]:
            out = out * z + c
        return out if out.ndim else complex(out)

    def to_pairs(self) -> list[list[float]]:
        """JSON-friendly ``[[re, im], ...]`` form."""
        return [[float(c.real), float(c.imag)] for c in self._c]

    def allclose(self, other: "TruncatedSeries", atol: float = 1e-12) -> bool:
        n = min(self.order, other.order)
        return bool(np.allclose(self._c[: n + 1], other._c[: n + 1], rtol=0.0, atol=atol))

    # -- structural helpers ------------------------------------------------
    def shift_up(self) -> "TruncatedSeries":
        """Multiply by ``z``; the order grows by one."""
        return TruncatedSeries(np.concatenate([[0.0], self._c]))

    def shift_down(self) -> "TruncatedSeries":
        """Divide by ``z``; requires a vanishing constant term, order drops by one."""
        if self._c[0] != 0:
            raise CompositionDomainError("cannot divide by z: constant term is nonzero")
        if self.order < 1:
            raise ValueError("order too small to divide by z")
        return TruncatedSeries(self._c[1:])

    def scale_argument(self, w: complex) -> "TruncatedSeries":
        """Series of ``f(w z)``."""
        return TruncatedSeries(self._c * w ** np.arange(len(self._c)))

    # -- arithmetic --------------------------------------------------------
    def _coerce(self, other) -> "TruncatedSeries":
        if isinstance(other, TruncatedSeries):
            return other
        if isinstance(other, (Number, np.number)):
            return TruncatedSeries.constant(other, self.order)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return ring_op(self, other, "add")

    __radd__ = __add__

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return ring_op(self, other, "sub")

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return ring_op(other, self, "sub")

    def __neg__(self):
        return TruncatedSeries(-self._c)

    def __mul__(self, other):
        if isinstance(other, (Number, np.number)):
            return TruncatedSeries(self._c * other)
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return ring_op(self, other, "mul")

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (Number, np.number)):
            if other == 0:
                raise SingularDivisorError("division by zero scalar")
            return TruncatedSeries(self._c / other)
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return ring_op(self, other, "div")

    def __rtruediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return ring_op(other, self, "div")

    def __pow__(self, alpha):
        return pow_real(self, alpha)


def ring_op(a: TruncatedSeries, b: TruncatedSeries, kind: str) -> TruncatedSeries:
    """Add, subtract, multiply or divide two series at their common order."""
    n = min(a.order, b.order)
    x, y = a.coeffs[: n + 1], b.coeffs[: n + 1]
    if kind == "add":
        return TruncatedSeries(x + y)
    if kind == "sub":
        return TruncatedSeries(x - y)
    if kind == "mul":
        return TruncatedSeries(np.convolve(x, y)[: n + 1])
    if kind == "div":
        if y[0] == 0:
            raise SingularDivisorError("divisor has zero constant term")
        out = np.zeros(n + 1, dtype=complex)
        for k in range(n + 1):
            out[k] = (x[k] - np.dot(out[:k], y[k:0:-1])) / y[0]
        return TruncatedSeries(out)
    raise ValueError(f"unknown ring operation {kind!r}")


def compose(outer: TruncatedSeries, inner: TruncatedSeries) -> TruncatedSeries:
    """Series of ``outer(inner(z))`` by Horner evaluation over the series ring."""
    if inner.coeffs[0] != 0:
        raise CompositionDomainError("inner series must vanish at the origin")
    n = min(outer.order, inner.order)
    inner = inner.truncate(n)
    out = TruncatedSeries.constant(outer.coeffs[n], n)
    for c in outer.coeffs[n - 1 :: -1] if n > 0 else []:
        out = out * inner + complex(c)
    return out


def comp_inverse(f: TruncatedSeries) -> TruncatedSeries:
    """Compositional inverse of a normalized germ ``z + a2 z**2 + ...``.

    Coefficients are fixed one order at a time: with ``g`` correct through
    ``w**(k-1)``, the ``w**k`` coefficient of ``f(g)`` depends on ``g_k`` with
    unit slope, so ``g_k`` is minus that residual.
    """
    if f.order < 2:
        raise NotNormalizedError("need order >= 2 to invert")
    if f.coeffs[0] != 0 or f.coeffs[1] != 1:
        raise NotNormalizedError("series must satisfy f(0) = 0 and f'(0) = 1")
    g = np.zeros(f.order + 1, dtype=complex)
    g[1] = 1.0
    for k in range(2, f.order + 1):
        resid = compose(f, TruncatedSeries(g)).coeffs[k]
        g[k] = -resid
    return TruncatedSeries(g)


def pow_real(f: TruncatedSeries, alpha: float) -> TruncatedSeries:
    """Principal power ``f**alpha`` for a series with constant term exactly 1.

    Uses the recurrence from ``f g' = alpha f' g`` for ``g = f**alpha``.
    """
    c = f.coeffs
    if c[0] != 1:
        raise BranchError(f"constant term must be exactly 1 for a real power, got {c[0]}")
    n = f.order
    g = np.zeros(n + 1, dtype=complex)
    g[0] = 1.0
    for m in range(1, n + 1):
        k = np.arange(1, m + 1)
        g[m] = np.sum(((alpha + 1) * k - m) * c[1 : m + 1] * g[m - k]) / m
    return TruncatedSeries(g)


def sym_q_derivative(f: TruncatedSeries, q: float) -> TruncatedSeries:
    """Symmetric q-derivative: ``z**n -> [n]_q z**(n-1)``; order drops by one."""
    check_q(q)
    if f.order < 1:
        raise ValueError("order too small to differentiate")
    weights = np.array([sym_q_number(n, q) for n in range(1, f.order + 1)])
    return TruncatedSeries(f.coeffs[1:] * weights)


def odd_part(f: TruncatedSeries) -> TruncatedSeries:
    """``f(z) - f(-z)``: odd coefficients doubled, even ones zeroed."""
    c = f.coeffs.copy()
    c[0::2] = 0.0
    return TruncatedSeries(2.0 * c)
