import mpmath
import pytest
from gmpy2 import mpq
from hypothesis import given, settings
from hypothesis import strategies as st

from sln_verlinde.exact import PiPowerValue
from sln_verlinde.verlinde import verlinde_polynomial
from sln_verlinde.witten_zeta import (
    TornheimRequest,
    mzv_bernoulli,
    mzv_direct,
    mzv_residue,
    sl2_leading,
    sl3_leading,
    sl3_leading_check,
)

CTX = mpmath.MPContext()
CTX.prec = 256


def brute_force(a, b, c, N):
    # square partial sum, no shortcuts
    return CTX.fsum(
        CTX.mpf(1) / (CTX.mpf(i) ** a * CTX.mpf(j) ** b * CTX.mpf(i + j) ** c)
        for i in range(1, N + 1) for j in range(1, N + 1)
    )


def test_s222_residue_and_bernoulli():
    assert mzv_residue(1) == mpq(1, 2835)
    assert mzv_bernoulli(1) == PiPowerValue(mpq(1, 2835), 6)


@pytest.mark.parametrize("g", [1, 2, 3, 4])
def test_residue_equals_bernoulli(g):
    assert mzv_residue(g) == mzv_bernoulli(g).coefficient
    assert mzv_bernoulli(g).coefficient > 0


@pytest.mark.parametrize("g", [1, 2, 3])
def test_direct_sum_within_certificate(g):
    r = mzv_direct(TornheimRequest(2 * g, 2 * g, 2 * g, 1e-13))
    exact = mzv_bernoulli(g).to_mpf(CTX)
    assert r.error_bound < 1e-13
    assert abs(r.value - exact) <= r.error_bound
    assert abs(r.value - exact) < 1e-12


def test_s222_value():
    r = mzv_direct(TornheimRequest(2, 2, 2, 1e-13))
    assert abs(float(r.value) - 0.3391153) < 1e-6


def test_direct_against_brute_force_partial_sums():
    # the diagonal partial sum includes the square i, j <= N/2 and sits inside the square i, j <= N
    r = mzv_direct(TornheimRequest(3, 2, 2), diagonals=60)
    assert brute_force(3, 2, 2, 30) <= r.value <= brute_force(3, 2, 2, 60)


def test_two_runs_agree_within_bounds():
    a = mzv_direct(TornheimRequest(2, 3, 1, 1e-6))
    b = mzv_direct(TornheimRequest(2, 3, 1, 1e-10))
    assert abs(a.value - b.value) <= a.error_bound + b.error_bound


@settings(max_examples=25)
@given(st.integers(1, 5), st.integers(1, 5), st.integers(1, 4))
def test_symmetry_in_a_b(a, b, c):
    if a + c < 2 or b + c < 2 or a + b + c < 4:
        return
    x = mzv_direct(TornheimRequest(a, b, c), diagonals=200)
    y = mzv_direct(TornheimRequest(b, a, c), diagonals=200)
    assert abs(x.value - y.value) < CTX.mpf(2) ** -200


def test_divergent_exponents_rejected():
    with pytest.raises(ValueError):
        TornheimRequest(1, 1, 0)
    with pytest.raises(ValueError):
        TornheimRequest(0, 2, 1)


def test_sl2_leading_values():
    assert sl2_leading(2) == mpq(1, 6)
    assert sl2_leading(3) == mpq(1, 180)


@pytest.mark.parametrize("g", [2, 3, 4, 5])
def test_sl2_leading_matches_polynomial(g):
    assert verlinde_polynomial(2, g).poly.leading_coefficient() == sl2_leading(g)


def test_sl3_leading_report():
    assert sl3_leading(2) == mpq(1, 20160)
    rep = sl3_leading_check(2, (20, 40))
    assert rep.predicted == mpq(1, 20160)
    assert [k for k, _ in rep.ratios] == [20, 40]
