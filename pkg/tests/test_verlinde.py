import json

import mpmath
import pytest
from gmpy2 import mpq
from hypothesis import given, settings
from hypothesis import strategies as st

from sln_verlinde.exact import RationalPolynomial
from sln_verlinde.verlinde import (
    LevelPolynomial,
    RoundingGuardError,
    VerificationError,
    VerlindeParams,
    guarded_round,
    positive_roots,
    residue_matrix,
    residue_matrix_values,
    verify_equivalence,
    verlinde_polynomial,
    verlinde_sum,
)

M6 = [
    [166, -45, -29, -18, -29, -45],
    [-45, 36, 9, 9, 36, -45],
    [-29, 9, 4, 9, -29, 36],
    [-18, 9, 9, -18, 9, 9],
    [-29, 36, -29, 9, 4, 9],
    [-45, -45, 36, 9, 9, 36],
]


def sl2_oracle(k, g):
    mpmath.mp.prec = 200
    s = mpmath.fsum((k / (2 * mpmath.sin(j * mpmath.pi / k) ** 2)) ** (g - 1) for j in range(1, k))
    return int(mpmath.nint(s))


def sl3_oracle(k, g):
    mpmath.mp.prec = 200
    terms = []
    for i in range(1, k):
        for j in range(1, k - i):
            d = 8 * mpmath.sin(i * mpmath.pi / k) * mpmath.sin(j * mpmath.pi / k) * mpmath.sin((i + j) * mpmath.pi / k)
            terms.append(d ** (-2 * (g - 1)))
    return int(mpmath.nint((3 * k * k) ** (g - 1) * mpmath.fsum(terms)))


# ---------------------------------------------------------------- parameters


def test_params_derived_constants():
    p = VerlindeParams(3, 2, 6)
    assert (p.rank, p.dual_coxeter, p.num_positive_roots, p.center_order, p.dimension) == (2, 3, 3, 3, 8)
    with pytest.raises(ValueError):
        VerlindeParams(2, 2, 1)
    with pytest.raises(ValueError):
        VerlindeParams(1, 2)


def test_positive_roots():
    assert positive_roots(4) == [(0,), (0, 1), (0, 1, 2), (1,), (1, 2), (2,)]


# ---------------------------------------------------------------- trigonometric sums


@pytest.mark.parametrize("k,expected", [(2, 1), (3, 4), (4, 10), (5, 20)])
def test_sl2_genus_two(k, expected):
    assert verlinde_sum(2, k, 2) == expected


@given(st.integers(2, 40))
def test_sl2_genus_one_counts_weights(k):
    assert verlinde_sum(2, k, 1) == k - 1


@given(st.integers(2, 4), st.integers(2, 12))
def test_genus_zero_is_one(n, k):
    assert verlinde_sum(n, k, 0) == (1 if k >= n else 0)


@settings(max_examples=60)
@given(st.integers(2, 30), st.integers(0, 5))
def test_sl2_sum_matches_direct_formula(k, g):
    assert verlinde_sum(2, k, g) == sl2_oracle(k, g)


@settings(max_examples=40)
@given(st.integers(3, 14), st.integers(1, 4))
def test_sl3_sum_matches_direct_formula(k, g):
    assert verlinde_sum(3, k, g) == sl3_oracle(k, g)


def test_sl3_k6_genus_two():
    assert verlinde_sum(3, 6, 2) == 166


def test_sl2_term_symmetry():
    k, g = 11, 3
    terms = [(mpmath.mpf(k) / (2 * mpmath.sin(j * mpmath.pi / k) ** 2)) ** (g - 1) for j in range(1, k)]
    assert all(abs(terms[j - 1] - terms[k - j - 1]) < 1e-20 for j in range(1, k))


def test_guard_rejects_non_integers_and_large_values():
    ctx = mpmath.MPContext()
    ctx.prec = 128
    with pytest.raises(RoundingGuardError):
        guarded_round(ctx.mpf(1) / 3)
    assert guarded_round(ctx.mpf(7) + ctx.ldexp(1, -100)) == 7
    ctx.prec = 64
    with pytest.raises(RoundingGuardError):
        guarded_round(ctx.mpf(2) ** 70)


def test_low_precision_is_refused_rather_than_wrong():
    with pytest.raises(RoundingGuardError):
        verlinde_sum(3, 30, 4, precision_bits=64)
    assert verlinde_sum(3, 30, 4) == verlinde_polynomial(3, 4).evaluate_integer(30)


def test_sum_preconditions():
    with pytest.raises(ValueError):
        verlinde_sum(2, 1, 2)
    with pytest.raises(ValueError):
        verlinde_sum(2, 5, 2, precision_bits=32)


# ---------------------------------------------------------------- level polynomials


def test_sl2_genus_two_polynomial():
    k = RationalPolynomial.gen()
    assert verlinde_polynomial(2, 2).poly == (k ** 3 - k) / 6


@pytest.mark.parametrize("n,g", [(n, g) for n in (2, 3, 4) for g in (2, 3, 4)])
def test_degree_is_dimension(n, g):
    assert verlinde_polynomial(n, g).degree == (n * n - 1) * (g - 1)


@settings(max_examples=200)
@given(st.sampled_from([(2, 2), (2, 3), (2, 5), (3, 2), (3, 3), (4, 2)]), st.integers(2, 40))
def test_polynomial_values_are_integers(ng, k):
    verlinde_polynomial(*ng).evaluate_integer(k)


def test_sl3_value_at_six():
    assert verlinde_polynomial(3, 2)(6) == 166


def test_sl4_against_derived_sum():
    # the n = 4 sum is first checked against the n = 2, 3 formulas above, then used here
    rep = verify_equivalence(4, 2, range(4, 9))
    assert rep.ok, rep.rows


@pytest.mark.parametrize("n,g,ks", [(2, 2, range(2, 21)), (2, 5, range(2, 21)), (3, 3, range(3, 13))])
def test_equivalence_report(n, g, ks):
    rep = verify_equivalence(n, g, ks)
    assert rep.ok
    assert [r[0] for r in rep.rows] == list(ks)


def test_equivalence_rejects_genus_one():
    with pytest.raises(ValueError):
        verify_equivalence(2, 1, range(2, 5))
    with pytest.raises(ValueError):
        verlinde_polynomial(2, 1)


def test_polynomial_json_round_trip():
    P = verlinde_polynomial(3, 2)
    data = json.loads(json.dumps(P.to_json()))
    assert data["coefficients"][8]["value"] == "1/20160"
    Q = LevelPolynomial.from_json(data)
    assert Q.poly == P.poly and (Q.n, Q.g) == (3, 2)


def test_evaluate_integer_rejects_fractions():
    P = LevelPolynomial(2, 2, RationalPolynomial([mpq(1, 2)]))
    with pytest.raises(VerificationError):
        P.evaluate_integer(3)


# ---------------------------------------------------------------- residue matrix


def test_m6_golden():
    assert residue_matrix(6, 2).rows() == M6


def test_interior_entry_direct():
    k = 6
    d = 8 * mpmath.sin(mpmath.pi / k) ** 2 * mpmath.sin(2 * mpmath.pi / k)
    assert int(mpmath.nint(3 * k * k / d ** 2)) == 36 == residue_matrix(6, 2)[1, 1]


@pytest.mark.parametrize("k,g", [(4, 2), (4, 3), (6, 3)])
def test_integer_matrix_invariants(k, g):
    M = residue_matrix(k, g)
    assert all(c == 0 for c in M.column_sums())
    assert all(M[0, j] == M[j, 0] for j in range(k))
    assert all(M[j, 0] == M[j, k - j] for j in range(1, k))
    assert M[0, 0] == verlinde_sum(3, k, g)


@pytest.mark.parametrize("k,g", [(5, 2), (7, 3)])
def test_algebraic_matrix_invariants(k, g):
    with pytest.raises(RoundingGuardError):
        residue_matrix(k, g)
    E = residue_matrix_values(k, g)
    tol = mpmath.mpf(2) ** -128
    assert all(abs(sum(E[i][j] for i in range(k))) < tol for j in range(k))
    assert all(abs(E[j][0] - E[j][k - j]) < tol for j in range(1, k))
    assert guarded_round(E[0][0]) == verlinde_sum(3, k, g)


def test_k5_interior_entry_is_irrational():
    # at k = 5 the interior residues lie in Q(sqrt 5)
    E = residue_matrix_values(5, 2)
    x = E[1][1].real
    assert abs(x - mpmath.nint(x)) > 0.01
