import numpy as np
import pytest
import sympy as sp
from hypothesis import given, strategies as st

from qhankel.errors import BranchError, CompositionDomainError, NotNormalizedError, \
    SingularDivisorError
from qhankel.pseries import (TruncatedSeries, comp_inverse, compose, odd_part, pow_real,
                             ring_op, sym_q_derivative)
from qhankel.qkernel import sym_q_number

ORDER = 6
coef = st.complex_numbers(max_magnitude=1.0, allow_nan=False, allow_infinity=False)
series = st.lists(coef, min_size=ORDER + 1, max_size=ORDER + 1).map(TruncatedSeries)
unit_series = st.lists(coef, min_size=ORDER, max_size=ORDER).map(
    lambda c: TruncatedSeries([1.0, *c]))
normalized = st.lists(coef, min_size=ORDER - 1, max_size=ORDER - 1).map(
    TruncatedSeries.from_normalized)
reals = st.floats(min_value=-2.5, max_value=2.5, allow_nan=False)

z = sp.symbols("z")


def sympy_coeffs(expr, n=ORDER):
    poly = sp.series(expr, z, 0, n + 1).removeO()
    return np.array([complex(poly.coeff(z, k)) for k in range(n + 1)])


def close(a, b, tol=1e-10):
    return np.max(np.abs(np.asarray(a) - np.asarray(b))) < tol


def test_geometric_series_division():
    x = TruncatedSeries.identity(4)
    assert (1 / (1 - x)).coeffs.tolist() == [1, 1, 1, 1, 1]


def test_operations_against_sympy():
    a = TruncatedSeries([1, 2, -1, 0.5, 0, 0.25, -0.5])
    b = TruncatedSeries([2, -1, 0.5, 0, 1, 0, 0.125])
    za = sum(complex(c).real * z ** k for k, c in enumerate(a.coeffs))
    zb = sum(complex(c).real * z ** k for k, c in enumerate(b.coeffs))
    assert close((a * b).coeffs, sympy_coeffs(za * zb))
    assert close((a / b).coeffs, sympy_coeffs(za / zb))
    assert close(pow_real(a, 0.5).coeffs, sympy_coeffs(sp.sqrt(za)))
    assert close(pow_real(a, -1.5).coeffs, sympy_coeffs(za ** sp.Rational(-3, 2)))


def test_compose_and_inverse_against_sympy():
    f = TruncatedSeries.from_normalized([0.5, -0.25, 0.125, 0, 0.3])
    fz = sum(float(c.real) * z ** k for k, c in enumerate(f.coeffs))
    g = TruncatedSeries([0, 0.3, 0.2, 0, -0.1, 0, 0])
    gz = sum(float(c.real) * z ** k for k, c in enumerate(g.coeffs))
    assert close(compose(f, g).coeffs, sympy_coeffs(fz.subs(z, gz)))
    w = sp.symbols("w")
    # inverse by sympy reversion through an undetermined-coefficient solve
    bs = sp.symbols("b2:7")
    ginv = w + sum(b * w ** k for k, b in enumerate(bs, start=2))
    eq = sp.expand(fz.subs(z, ginv)) - w
    sol = sp.solve([eq.coeff(w, k) for k in range(2, 7)], bs, dict=True)[0]
    expected = [0, 1] + [float(sol[b]) for b in bs]
    assert close(comp_inverse(f).coeffs, expected)


@pytest.mark.parametrize("a2, a3, a4", [(1, 0, 0), (0.5, -0.3, 0.2), (1j, 0.5, -1 + 1j)])
def test_inverse_low_coefficients_closed_form(a2, a3, a4):
    g = comp_inverse(TruncatedSeries.from_normalized([a2, a3, a4]))
    assert close(g.coeffs[2:5], [-a2, 2 * a2 ** 2 - a3, -(5 * a2 ** 3 - 5 * a2 * a3 + a4)], 1e-12)


@given(series, series, series)
def test_ring_axioms(a, b, c):
    assert close(((a * b) * c).coeffs, (a * (b * c)).coeffs)
    assert close((a * (b + c)).coeffs, (a * b + a * c).coeffs)
    assert close((a * b).coeffs, (b * a).coeffs)
    assert close(((a + b) - b).coeffs, a.coeffs)


@given(series, unit_series)
def test_division_inverts_multiplication(a, b):
    assert close(((a * b) / b).coeffs, a.coeffs, 1e-8)


@given(unit_series, reals, reals)
def test_power_laws(f, s, t):
    assert close((pow_real(f, s) * pow_real(f, t)).coeffs, pow_real(f, s + t).coeffs, 1e-8)
    assert close(pow_real(f, 0.0).coeffs, TruncatedSeries.constant(1, ORDER).coeffs)
    assert close(pow_real(f, 1.0).coeffs, f.coeffs)


@given(normalized)
def test_inverse_roundtrip(f):
    g = comp_inverse(f)
    ident = TruncatedSeries.identity(ORDER).coeffs
    assert close(compose(f, g).coeffs, ident, 1e-9)
    assert close(compose(g, f).coeffs, ident, 1e-9)


@given(series, st.floats(min_value=0.05, max_value=0.99))
def test_q_derivative_of_monomials(f, q):
    d = sym_q_derivative(f, q)
    expected = [f.coeffs[n] * sym_q_number(n, q) for n in range(1, ORDER + 1)]
    assert close(d.coeffs, expected)
    assert d.order == ORDER - 1


@given(series, st.floats(min_value=0.3, max_value=0.95))
def test_q_derivative_difference_quotient(f, q):
    zz = 0.2 + 0.1j
    direct = (f(q * zz) - f(zz / q)) / ((q - 1 / q) * zz)
    assert abs(sym_q_derivative(f, q)(zz) - direct) < 1e-9


@given(series)
def test_odd_part(f):
    zz = 0.3 - 0.2j
    assert abs(odd_part(f)(zz) - (f(zz) - f(-zz))) < 1e-12


def test_order_propagates_minimum():
    a = TruncatedSeries([1, 1, 1, 1])
    b = TruncatedSeries([1, 1])
    assert (a * b).order == 1
    assert ring_op(a, b, "add").coeffs.tolist() == [2, 2]


def test_immutable_coefficients():
    s = TruncatedSeries([1, 2, 3])
    with pytest.raises(ValueError):
        s.coeffs[0] = 5


def test_shift_and_scale():
    s = TruncatedSeries([0, 1, 2])
    assert s.shift_down().coeffs.tolist() == [1, 2]
    assert s.shift_up().coeffs.tolist() == [0, 0, 1, 2]
    assert s.scale_argument(2).coeffs.tolist() == [0, 2, 8]
    with pytest.raises(CompositionDomainError):
        TruncatedSeries([1, 1]).shift_down()


def test_error_paths():
    with pytest.raises(SingularDivisorError):
        TruncatedSeries([1, 1]) / TruncatedSeries([0, 1])
    with pytest.raises(SingularDivisorError):
        TruncatedSeries([1, 1]) / 0
    with pytest.raises(BranchError):
        pow_real(TruncatedSeries([2, 1]), 0.5)
    with pytest.raises(CompositionDomainError):
        compose(TruncatedSeries([1, 1]), TruncatedSeries([1, 1]))
    with pytest.raises(NotNormalizedError):
        comp_inverse(TruncatedSeries([0, 2, 1]))
    with pytest.raises(IndexError):
        TruncatedSeries([1, 2])[5]
    with pytest.raises(ValueError):
        ring_op(TruncatedSeries([1]), TruncatedSeries([1]), "pow")


def test_json_pairs_and_evaluation():
    s = TruncatedSeries([1, 1j])
    assert s.to_pairs() == [[1.0, 0.0], [0.0, 1.0]]
    assert s(2.0) == 1 + 2j
    assert np.allclose(s(np.array([0.0, 1.0])), [1, 1 + 1j])
