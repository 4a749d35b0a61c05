"""Acceptance checks shared by ``verlinde verify-all`` and the test suite.

Each ``criterion_N`` returns a ``CheckResult``.  Criterion 10 is advisory: it reports but
never counts as a failure.
"""

from __future__ import annotations

import random
import time
from dataclasses import dataclass
from functools import lru_cache
from math import factorial

import mpmath
from gmpy2 import mpq

from .exact import RationalPolynomial, bernoulli_number
from .fusion import (
    build_fusion,
    clebsch_gordan_su2,
    fusion_coefficients,
    fusion_rule_check,
    genus_correlator,
    level_weights,
)
from .intersection import riemann_roch_check
from .series import (
    QQ,
    ComplexField,
    LaurentSeries,
    gen_cot_formal_level,
    gen_named_series,
    gen_scaled_cot,
    residue,
)
from .verlinde import (
    RoundingGuardError,
    guarded_round,
    residue_entry,
    residue_matrix,
    residue_matrix_values,
    verify_equivalence,
    verlinde_polynomial,
    verlinde_sum,
)
from .witten_zeta import (
    TornheimRequest,
    mzv_bernoulli,
    mzv_direct,
    mzv_residue,
    sl2_leading,
    sl3_leading_check,
)

M6 = (
    (166, -45, -29, -18, -29, -45),
    (-45, 36, 9, 9, 36, -45),
    (-29, 9, 4, 9, -29, 36),
    (-18, 9, 9, -18, 9, 9),
    (-29, 36, -29, 9, 4, 9),
    (-45, -45, 36, 9, 9, 36),
)


@dataclass
class CheckResult:
    number: int
    title: str
    ok: bool
    detail: str = ""
    seconds: float = 0.0
    advisory: bool = False

    def line(self) -> str:
        if self.advisory:
            status = "ADVISORY-" + ("AGREE" if self.ok else "DIFFER")
        else:
            status = "PASS" if self.ok else "FAIL"
        return f"[{status}] criterion {self.number}: {self.title} ({self.seconds:.2f}s) {self.detail}".rstrip()


def _timed(number, title, fn, advisory=False) -> CheckResult:
    t = time.perf_counter()
    try:
        ok, detail = fn()
    except Exception as exc:  # a crash is a failure, reported with its message
        ok, detail = False, f"{type(exc).__name__}: {exc}"
    return CheckResult(number, title, ok, detail, time.perf_counter() - t, advisory)


# ------------------------------------------------------------------ 1 .. 8


def criterion_1(precision_bits=256):
    def run():
        t = time.perf_counter()
        M = residue_matrix(6, 2, precision_bits)
        dt = time.perf_counter() - t
        if M.entries != M6:
            return False, f"got {M.rows()}"
        return dt < 10, f"matrix matches, {dt:.3f}s"

    return _timed(1, "M_6 golden matrix", run)


def matrix_invariants(k: int, g: int, precision_bits=256):
    """Returns (ok, mode).  Integer matrices are checked exactly; matrices with irrational
    entries are checked on unrounded values to 2^-(precision/2), with entry (0,0) rounded."""
    V = verlinde_sum(3, k, g, precision_bits)
    try:
        M = residue_matrix(k, g, precision_bits)
    except RoundingGuardError:
        E = residue_matrix_values(k, g, precision_bits)
        tol = mpmath.mpf(2) ** (-(precision_bits // 2))
        ok = all(abs(sum(E[i][j] for i in range(k))) < tol for j in range(k))
        ok &= all(abs(E[0][j] - E[j][0]) < tol for j in range(k))
        ok &= all(abs(E[j][0] - E[j][k - j]) < tol for j in range(1, k))
        ok &= guarded_round(E[0][0]) == V
        return ok, "algebraic"
    ok = all(c == 0 for c in M.column_sums())
    ok &= all(M[0, j] == M[j, 0] for j in range(k))
    ok &= all(M[j, 0] == M[j, k - j] for j in range(1, k))
    ok &= M[0, 0] == V
    return ok, "integer"


def criterion_2(precision_bits=256):
    def run():
        modes = []
        for k in (4, 5, 6, 7):
            for g in (2, 3):
                ok, mode = matrix_invariants(k, g, precision_bits)
                if not ok:
                    return False, f"invariants fail at k={k}, g={g}"
                modes.append(f"{k}/{g}:{mode[0]}")
        return True, "k/g:mode " + " ".join(modes)

    return _timed(2, "residue matrix invariants", run)


def criterion_3(precision_bits=256):
    def run():
        t = time.perf_counter()
        cases = [(2, g, range(2, 21)) for g in (2, 3, 4, 5)]
        cases += [(3, g, range(3, 13)) for g in (2, 3, 4)]
        cases += [(4, 2, range(4, 9))]
        for n, g, ks in cases:
            rep = verify_equivalence(n, g, ks, precision_bits)
            if not rep.ok:
                bad = [r for r in rep.rows if not r[3]]
                return False, f"n={n} g={g} mismatches {bad[:3]}"
        dt = time.perf_counter() - t
        return dt < 60, f"{len(cases)} (n,g) families agree"

    return _timed(3, "sum/polynomial equivalence", run)


def criterion_4():
    def run():
        for n in (2, 3, 4):
            for g in (2, 3, 4):
                P = verlinde_polynomial(n, g)
                if P.degree != (n * n - 1) * (g - 1):
                    return False, f"degree {P.degree} for n={n} g={g}"
                for k in range(2, 41):
                    P.evaluate_integer(k)
        return True, "degrees (n^2-1)(g-1), integral for k<=40"

    return _timed(4, "degree and integrality", run)


def criterion_5():
    def run():
        k = RationalPolynomial.gen()
        target = (k ** 3 - k) / 6
        if verlinde_polynomial(2, 2).poly != target:
            return False, f"V = {verlinde_polynomial(2, 2)}"
        rr = riemann_roch_check(2, 2)
        shifted = ((k + 2) ** 3 - (k + 2)) / 6
        ok = rr.ok and rr.pairing.poly == shifted
        return ok, f"Q(k) = {rr.pairing}"

    return _timed(5, "SL2 closed form", run)


def criterion_6():
    def run():
        t = time.perf_counter()
        for n in (2, 3):
            for g in (2, 3, 4):
                rr = riemann_roch_check(n, g)
                if not rr.ok:
                    return False, f"n={n} g={g}: Q={rr.pairing} vs V(k+h)={rr.shifted_verlinde}"
        dt = time.perf_counter() - t
        return dt < 60, "Q(k) = V(k+n) for n in {2,3}, g in {2,3,4}"

    return _timed(6, "Riemann-Roch identity", run)


def _relative(dev, scale):
    return dev / max(mpmath.mpf(1), abs(scale))


def criterion_7(precision_bits=256):
    def run():
        tol = mpmath.mpf(2) ** -100
        worst = mpmath.mpf(0)
        for l in range(0, 9):
            N = fusion_coefficients(build_fusion(2, l, precision_bits))
            for a in range(l + 1):
                for b in range(l + 1):
                    for c in range(l + 1):
                        if N[(a,), (b,), (c,)] != clebsch_gordan_su2(a, b, c, l):
                            return False, f"SL2 level {l}: N_{a}{b}^{c}"
        for n, levels in ((2, range(0, 11)), (3, range(0, 6))):
            for l in levels:
                F = build_fusion(n, l, precision_bits)
                for g in range(0, 5):
                    if guarded_round(genus_correlator(F, g)) != verlinde_sum(n, l + n, g, precision_bits):
                        return False, f"SL{n} level {l} genus {g} correlator"
                ws = level_weights(n, l)
                for g in range(1, 5):
                    for ins in ((), (ws[-1],), tuple(ws[:2])):
                        r = fusion_rule_check(F, g, ins)
                        worst = max(worst, _relative(r.deviation, r.lhs))
        if worst > tol:
            return False, f"fusion-rule deviation {mpmath.nstr(worst, 3)}"
        return True, f"max relative fusion-rule deviation {mpmath.nstr(worst, 3)}"

    return _timed(7, "fusion consistency", run)


def criterion_8():
    def run():
        if mzv_residue(1) != mpq(1, 2835):
            return False, f"mzv_residue(1) = {mzv_residue(1)}"
        b1 = mzv_bernoulli(1)
        if b1.coefficient != mpq(1, 2835) or b1.pi_power != 6:
            return False, f"mzv_bernoulli(1) = {b1}"
        ctx = mpmath.MPContext()
        ctx.prec = 256
        for g in (1, 2):
            exact = mzv_bernoulli(g)
            if mzv_residue(g) != exact.coefficient:
                return False, f"residue and Bernoulli routes differ at g={g}"
            d = mzv_direct(TornheimRequest(2 * g, 2 * g, 2 * g, 1e-13))
            if abs(exact.to_mpf(ctx) - d.value) > 1e-12:
                return False, f"direct sum differs at g={g}"
        for g in (2, 3, 4, 5):
            if verlinde_polynomial(2, g).poly.leading_coefficient() != sl2_leading(g):
                return False, f"SL2 leading coefficient at g={g}"
        return True, "S(2,2,2) = pi^6/2835, three routes agree; SL2 leading terms exact"

    return _timed(8, "Tornheim sums and SL2 asymptotics", run)


# ------------------------------------------------------------------ 9: randomized series suite


def random_rational(rng: random.Random, size: int = 9) -> mpq:
    return mpq(rng.randint(-size, size), rng.randint(1, size))


def random_series(rng: random.Random, vars=("x",), nonzero_lead: bool = False) -> LaurentSeries:
    """Random nested series; each level has floor in [-2, 2] and 1 to 5 known coefficients."""
    floor = rng.randint(-2, 2)
    width = rng.randint(1, 5)
    coeffs = []
    for i in range(width):
        if len(vars) == 1:
            c = random_rational(rng)
            if i == 0 and nonzero_lead and c == 0:
                c = mpq(1)
        else:
            c = random_series(rng, vars[1:], nonzero_lead=(i == 0 and nonzero_lead))
        coeffs.append(c)
    return LaurentSeries(vars, floor, coeffs, QQ, normalize=False)


def _ring_laws(rng):
    vars = ("x", "y")[: rng.randint(1, 2)]
    a, b, c = (random_series(rng, vars) for _ in range(3))
    return (
        a + b == b + a
        and a * b == b * a
        and (a + b) + c == a + (b + c)
        and (a * b) * c == a * (b * c)
        and a * (b + c) == a * b + a * c
        and a - a == a * 0
    )


def _inverse_round_trip(rng):
    vars = ("x", "y")[: rng.randint(1, 2)]
    a = random_series(rng, vars, nonzero_lead=True)
    prod = a * a.inverse()
    one = LaurentSeries.one(vars, prod.trunc)
    return prod == one


def _residue_linearity(rng):
    a, b = random_series(rng), random_series(rng)
    al, be = random_rational(rng), random_rational(rng)
    if min(a.trunc, b.trunc) <= -1:
        return True  # residue not determined; nothing to test
    return residue(a * al + b * be) == al * residue(a) + be * residue(b)


def _cot_bernoulli(rng):
    n = rng.randint(1, 40)
    cot = gen_named_series("cot", "x", 2 * n)
    if cot.coefficient(2 * n - 1) != (-4) ** n * bernoulli_number(2 * n) / factorial(2 * n):
        return False
    # cot x sin x = cos x, independent of the Bernoulli numbers
    t = rng.randint(1, 30)
    s = gen_named_series("sin", "x", t + 1)
    lhs = gen_named_series("cot", "x", t) * s
    if lhs != gen_named_series("cos", "x", t):
        return False
    k = rng.randint(1, 30)
    sym = gen_cot_formal_level("x", t).map_coefficients(lambda p: p(mpq(k)), QQ)
    return sym == gen_scaled_cot("x", t, k)


@lru_cache(maxsize=None)
def _entry(k, g, i, j, prec=192):
    return residue_entry(k, g, i, j, _field(prec))


@lru_cache(maxsize=None)
def _field(prec):
    return ComplexField(prec)


def _sl3_order_symmetry(rng):
    """The residue at p_ij with u innermost equals the one with v innermost, i.e. M(i,j) = M(j,i)."""
    k = rng.choice((3, 4, 5, 6, 7, 8))
    g = rng.choice((2, 3))
    i, j = rng.randrange(k), rng.randrange(k)
    x, y = _entry(k, g, i, j), _entry(k, g, j, i)
    if k in (4, 6):
        return guarded_round(x) == guarded_round(y)
    return abs(x - y) < mpmath.mpf(2) ** -96


PROPERTIES = {
    "ring laws": _ring_laws,
    "inverse round trip": _inverse_round_trip,
    "residue linearity": _residue_linearity,
    "cot coefficients vs Bernoulli": _cot_bernoulli,
    "SL3 residue-order symmetry": _sl3_order_symmetry,
}


def property_suite(cases: int = 1000, seed: int = 20261015) -> dict:
    out = {}
    for name, prop in PROPERTIES.items():
        rng = random.Random(f"{seed}:{name}")
        failures = sum(0 if prop(rng) else 1 for _ in range(cases))
        out[name] = (cases - failures, cases)
    return out


def criterion_9(cases: int = 1000):
    def run():
        res = property_suite(cases)
        ok = all(p == t for p, t in res.values())
        return ok, "; ".join(f"{k} {p}/{t}" for k, (p, t) in res.items())

    return _timed(9, "series-engine randomized properties", run)


# ------------------------------------------------------------------ 10: advisory


def criterion_10():
    def run():
        rep = sl3_leading_check(2, (10, 20, 40, 80))
        ratios = ", ".join(f"k={k}: {float(r):.4e}" for k, r in rep.ratios)
        return rep.exact_match, (
            f"k^8 coefficient {rep.polynomial_coefficient} vs predicted {rep.predicted}; V_k/k^8 {ratios}"
        )

    return _timed(10, "SL3 leading constant (advisory)", run, advisory=True)


CRITERIA = [criterion_1, criterion_2, criterion_3, criterion_4, criterion_5,
            criterion_6, criterion_7, criterion_8, criterion_9, criterion_10]


def run_all(precision_bits: int = 256, cases: int = 1000) -> list[CheckResult]:
    results = []
    for fn in CRITERIA:
        if fn in (criterion_1, criterion_2, criterion_3, criterion_7):
            results.append(fn(precision_bits))
        elif fn is criterion_9:
            results.append(fn(cases))
        else:
            results.append(fn())
    return results
