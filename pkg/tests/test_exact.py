import math

import mpmath
import pytest
import sympy
from gmpy2 import mpq
from hypothesis import given, settings
from hypothesis import strategies as st

from sln_verlinde.exact import (
    PiPowerValue,
    Q,
    RationalPolynomial,
    bernoulli_number,
    bernoulli_polynomial,
    format_rational,
    parse_rational,
    poly_integrate_unit_interval,
    zeta_even,
)

from strategies import rationals

polys = st.lists(rationals, max_size=7).map(RationalPolynomial)


def test_bernoulli_small_values():
    assert bernoulli_number(0) == 1
    assert bernoulli_number(1) == mpq(-1, 2)
    assert bernoulli_number(2) == mpq(1, 6)
    assert bernoulli_number(4) == mpq(-1, 30)
    assert bernoulli_number(12) == mpq(-691, 2730)
    assert bernoulli_number(7) == 0


@pytest.mark.parametrize("n", range(2, 61))
def test_bernoulli_against_sympy(n):
    b = sympy.bernoulli(n)
    assert bernoulli_number(n) == mpq(int(b.p), int(b.q))


def test_bernoulli_rejects_negative():
    with pytest.raises(ValueError):
        bernoulli_number(-1)


@pytest.mark.parametrize("n", range(0, 12))
def test_bernoulli_polynomial_against_sympy(n):
    x = sympy.symbols("x")
    ref = sympy.Poly(sympy.bernoulli(n, x), x).all_coeffs()[::-1]
    got = bernoulli_polynomial(n)
    assert [mpq(int(sympy.Rational(c).p), int(sympy.Rational(c).q)) for c in ref] == list(got.coeffs)


@pytest.mark.parametrize("n", range(1, 8))
def test_bernoulli_polynomial_integrates_to_zero(n):
    assert poly_integrate_unit_interval(bernoulli_polynomial(n)) == 0


@pytest.mark.parametrize("n", range(1, 10))
def test_zeta_even_matches_mpmath(n):
    z = zeta_even(n)
    assert z.pi_power == 2 * n
    assert abs(float(z) - float(mpmath.zeta(2 * n))) < 1e-14


def test_zeta_two():
    assert zeta_even(1) == PiPowerValue(mpq(1, 6), 2)
    assert zeta_even(2) == PiPowerValue(mpq(1, 90), 4)


@given(rationals)
def test_rational_text_round_trip(x):
    assert parse_rational(format_rational(x)) == x


def test_format_rational_integer():
    assert format_rational(mpq(4, 2)) == "2"
    assert format_rational(mpq(-1, 6)) == "-1/6"
    assert Q("3/9") == mpq(1, 3)


@given(polys, polys, polys)
def test_polynomial_ring_laws(a, b, c):
    assert a + b == b + a
    assert a * b == b * a
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a - a == 0


@given(polys, polys, rationals)
def test_evaluation_is_a_homomorphism(a, b, x):
    assert (a * b)(x) == a(x) * b(x)
    assert (a + b)(x) == a(x) + b(x)


@given(polys, rationals, rationals)
def test_shift(p, h, x):
    assert p.shift(h)(x) == p(x + h)
    assert p.shift(h).shift(-h) == p


@given(polys)
def test_derivative_of_antiderivative(p):
    assert p.antiderivative().derivative() == p


def test_polynomial_display_and_degree():
    k = RationalPolynomial.gen()
    p = (k ** 3 - k) / 6
    assert p.degree == 3
    assert p.leading_coefficient() == mpq(1, 6)
    assert str(p) == "1/6*k^3 - 1/6*k"
    assert RationalPolynomial().degree == -1


def test_pi_power_arithmetic():
    a = PiPowerValue(mpq(1, 2835), 6)
    assert a * 2835 == PiPowerValue(1, 6)
    assert (a + a).coefficient == mpq(2, 2835)
    assert a * PiPowerValue(1, 2) == PiPowerValue(mpq(1, 2835), 8)
    assert a.to_json() == {"coefficient": "1/2835", "pi_power": 6}
    assert abs(float(a) - math.pi ** 6 / 2835) < 1e-15
    with pytest.raises(ValueError):
        a + PiPowerValue(1, 2)
    assert PiPowerValue(0, 2) == PiPowerValue(0, 4)
