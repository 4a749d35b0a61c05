import pytest
from gmpy2 import mpq
from hypothesis import given, settings
from hypothesis import strategies as st

from sln_verlinde.exact import RationalPolynomial
from sln_verlinde.intersection import (
    IntersectionQuery,
    ahat_series,
    intersection_pairing,
    riemann_roch_check,
    wick_rotate,
)
from sln_verlinde.series import TruncationError, series_from_terms
from sln_verlinde.verlinde import cartan_vars, verlinde_polynomial, weyl_truncations

from strategies import rationals

k = RationalPolynomial.gen()


def test_ahat_leading_terms_sl2():
    A = ahat_series(2, 2, [6]).series
    # (x / sinh x)^2 = 1 - x^2/3 + x^4/15 - ...
    assert dict(A.terms()) == {(0,): 1, (2,): mpq(-1, 3), (4,): mpq(1, 15)}


@pytest.mark.parametrize("n,g", [(2, 3), (3, 2), (3, 3)])
def test_ahat_even_with_unit_constant(n, g):
    A = ahat_series(n, g)
    assert A.constant_term() == 1
    assert all(sum(e) % 2 == 0 for e, _ in A.series.terms())


def test_wick_rotation():
    A = ahat_series(2, 2, [6]).series
    assert dict(wick_rotate(A).terms()) == {(0,): 1, (2,): mpq(1, 3), (4,): mpq(1, 15)}
    odd = series_from_terms(("x1",), {(1,): 1}, (3,))
    with pytest.raises(ValueError):
        wick_rotate(odd)


def test_volume_polynomial_shape():
    P = intersection_pairing(IntersectionQuery(2, 2))
    assert P.degree == 3


@pytest.mark.parametrize("n,g", [(2, 2), (2, 4), (3, 2), (3, 3)])
def test_volume_degree_is_dimension(n, g):
    assert intersection_pairing(IntersectionQuery(n, g)).degree == (n * n - 1) * (g - 1)


def test_zero_insertion():
    assert intersection_pairing(IntersectionQuery(2, 3, 0)).poly.is_zero()


def test_odd_insertion_pairs_to_zero():
    T = weyl_truncations(3, 2)
    P = series_from_terms(cartan_vars(3), {(1, 0): 1, (0, 3): 2, (2, 1): 5}, T)
    assert intersection_pairing(IntersectionQuery(3, 2, P)).poly.is_zero()


@settings(max_examples=100)
@given(st.dictionaries(st.tuples(st.integers(0, 2), st.integers(0, 2)), rationals, max_size=5),
       st.dictionaries(st.tuples(st.integers(0, 2), st.integers(0, 2)), rationals, max_size=5),
       rationals)
def test_pairing_is_linear(ta, tb, c):
    T = weyl_truncations(3, 2)
    v = cartan_vars(3)
    A, B = series_from_terms(v, ta, T), series_from_terms(v, tb, T)
    pair = lambda P: intersection_pairing(IntersectionQuery(3, 2, P)).poly
    assert pair(A + B * c) == pair(A) + pair(B) * c


def test_insufficient_truncation():
    P = series_from_terms(cartan_vars(3), {(0, 0): 1}, (1, 1))
    with pytest.raises(TruncationError):
        intersection_pairing(IntersectionQuery(3, 2, P))


def test_riemann_roch_sl2_genus_two():
    rr = riemann_roch_check(2, 2)
    assert rr.ok
    assert rr.pairing.poly == ((k + 2) ** 3 - (k + 2)) / 6
    assert rr.pairing.poly(1) == 4


@pytest.mark.parametrize("n,g", [(n, g) for n in (2, 3) for g in (2, 3, 4)])
def test_riemann_roch_identity(n, g):
    rr = riemann_roch_check(n, g)
    assert rr.ok
    assert rr.pairing.poly(0) == verlinde_polynomial(n, g).poly(n)


def test_unrotated_ahat_does_not_give_the_verlinde_polynomial():
    # kept as a record: without u -> I u the pairing gives (K^3 + K)/6 in K = k + 2
    A = ahat_series(2, 2).series
    Q = intersection_pairing(IntersectionQuery(2, 2, A))
    assert Q.poly == (k ** 3 + k) / 6
    assert Q.poly != verlinde_polynomial(2, 2).poly


def test_integer_level():
    A = wick_rotate(ahat_series(2, 2).series)
    assert intersection_pairing(IntersectionQuery(2, 2, A, level=1, level_shift=2)) == 4


def test_genus_one_rejected():
    with pytest.raises(ValueError):
        IntersectionQuery(2, 1)
