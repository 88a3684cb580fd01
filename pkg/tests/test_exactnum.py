import cmath
import json
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from wreathwords.exactnum import (CycloNumber, Polynomial, RationalFunction, cyclo_from_json, cyclo_to_json,
                                  cyclotomic_polynomial, falling_factorial, format_rf, laurent_expand,
                                  poly_gcd, rf_from_json, rf_to_json)

fractions = st.fractions(min_value=-5, max_value=5, max_denominator=6)
conductors = st.sampled_from([1, 2, 3, 4, 5, 6, 8, 12])


@st.composite
def cyclos(draw, N=None):
    N = N or draw(conductors)
    return CycloNumber(N, draw(st.lists(fractions, min_size=0, max_size=N)))


@st.composite
def cyclo_triples(draw):
    N = draw(conductors)
    return draw(cyclos(N)), draw(cyclos(N)), draw(cyclos(draw(conductors)))


def close(x, y, tol=1e-9):
    return abs(x.to_complex() - complex(y)) < tol


def test_cyclotomic_polynomials():
    n = Polynomial.n()
    assert cyclotomic_polynomial(6) == n * n - n + 1
    assert cyclotomic_polynomial(1) == n - 1
    assert cyclotomic_polynomial(4) == n * n + 1
    assert cyclotomic_polynomial(12) == n**4 - n**2 + 1


def test_zeta_arithmetic():
    z = CycloNumber.zeta(3)
    assert close(1 + z, complex(0.5, 3**0.5 / 2))
    assert 1 + z + z * z == 0
    assert str(z * z) == "-1-z"
    assert z**3 == 1
    assert CycloNumber.zeta(4) ** 2 == -1
    assert CycloNumber.zeta(6) ** 3 == -1


def test_common_conductor_equality_and_hash():
    # zeta_6^2 = zeta_3 and i^2 = -1 live in different fields
    assert CycloNumber.zeta(6, 2) == CycloNumber.zeta(3)
    assert hash(CycloNumber.zeta(6, 2)) == hash(CycloNumber.zeta(3))
    assert CycloNumber.zeta(4) ** 2 == CycloNumber.rational(-1, 8)
    assert hash(CycloNumber.rational(Fraction(2, 3), 12)) == hash(CycloNumber.rational(Fraction(2, 3)))
    s = CycloNumber.zeta(3) + CycloNumber.zeta(4)
    assert close(s, cmath.exp(2j * cmath.pi / 3) + 1j)


def test_rational_comparisons():
    half = CycloNumber.rational(Fraction(1, 2))
    assert half == Fraction(1, 2)
    assert half.is_rational() and half.to_fraction() == Fraction(1, 2)
    assert not CycloNumber.zeta(3).is_rational()
    with pytest.raises(ZeroDivisionError):
        CycloNumber.rational(0).inverse()


@given(cyclo_triples())
@settings(max_examples=60, deadline=None)
def test_field_axioms(t):
    x, y, z = t
    assert x + y == y + x
    assert x * y == y * x
    assert (x + y) + z == x + (y + z)
    assert (x * y) * z == x * (y * z)
    assert x * (y + z) == x * y + x * z
    assert x - x == 0
    if not x.is_zero():
        assert x * x.inverse() == 1
        assert (y / x) * x == y


@given(cyclos())
@settings(max_examples=60, deadline=None)
def test_conjugation(x):
    assert x.conj().conj() == x
    assert close(x.conj(), x.to_complex().conjugate())
    assert (x * x.conj()).to_complex().imag == pytest.approx(0, abs=1e-9)


@given(cyclos(), cyclos())
@settings(max_examples=60, deadline=None)
def test_complex_embedding_is_a_homomorphism(x, y):
    assert close(x * y, x.to_complex() * y.to_complex(), 1e-7)
    assert close(x + y, x.to_complex() + y.to_complex(), 1e-7)


@given(cyclos())
@settings(max_examples=40, deadline=None)
def test_json_round_trip(x):
    assert cyclo_from_json(json.loads(json.dumps(cyclo_to_json(x)))) == x


def test_falling_factorials():
    assert falling_factorial(3)(5) == 60
    assert falling_factorial(0)(7) == 1
    assert falling_factorial(2)(1) == 0
    f = RationalFunction(falling_factorial(4), falling_factorial(2) ** 2)
    assert f(4) == Fraction(1, 6)


def test_polynomial_division_and_gcd():
    n = Polynomial.n()
    a = (n - 1) * (n - 2) * (n + 3)
    b = (n - 2) * (n * n + 1)
    q, r = a.divmod(n - 2)
    assert r.is_zero() and q == (n - 1) * (n + 3)
    assert poly_gcd(a, b) == n - 2


def test_rational_function_reduction_and_poles():
    n = Polynomial.n()
    f = RationalFunction((n - 1) * (n - 2), 2 * (n - 1) * (n - 3))
    assert f.den == n - 3
    assert f(5) == Fraction(3, 4)
    with pytest.raises(ZeroDivisionError):
        f(3)
    assert format_rf(RationalFunction(Polynomial.constant(1), n - 1)) == "(1) / (n - 1)"


def test_laurent_of_one_over_n_minus_one():
    s = laurent_expand(RationalFunction(Polynomial.constant(1), Polynomial.linear_root(1)), 4)
    assert [s.coefficient(-p) for p in range(5)] == [0, 1, 1, 1, 1]
    with pytest.raises(IndexError):
        s.coefficient(-7)


def test_laurent_with_positive_order():
    n = Polynomial.n()
    s = laurent_expand(RationalFunction(n * n + 1, n - 1), 3)
    # (n^2+1)/(n-1) = n + 1 + 2/n + 2/n^2 + ...
    assert [s.coefficient(p) for p in (1, 0, -1, -2)] == [1, 1, 2, 2]


@given(st.lists(fractions, min_size=1, max_size=4), st.lists(st.integers(-3, 3), min_size=1, max_size=3))
@settings(max_examples=40, deadline=None)
def test_laurent_partial_sums_converge(num, roots):
    den = Polynomial([1])
    for j in roots:
        den = den * Polynomial.linear_root(j)
    f = RationalFunction(Polynomial(num), den)
    if f.is_zero():
        return
    K = 6
    s = laurent_expand(f, K)
    n0 = 1000
    exact = f(n0).to_complex()
    approx = s.partial_sum(n0).to_complex()
    scale = n0 ** (s.lead_order - K - 1) * 10 ** (K + 2)
    assert abs(exact - approx) <= scale


@given(st.lists(fractions, max_size=4), st.lists(fractions, min_size=1, max_size=3).filter(any))
@settings(max_examples=40, deadline=None)
def test_rf_json_round_trip(num, den):
    f = RationalFunction(Polynomial(num), Polynomial(den))
    assert rf_from_json(json.loads(json.dumps(rf_to_json(f)))) == f
