"""Intersection pairings on the moduli space as residues, and the Riemann-Roch check.

The pairing of ``e^{k omega}`` with a class ``P`` is

    sign * (n k^(n-1))^(g-1) Res_{x_{n-1}} ... Res_{x_1}
        prod_i k cot(k x_i) * P / prod_roots (2 u_root)^(2(g-1))

with the same orientation sign as the level polynomial.  ``P`` is a power series in the
Cartan variables ``x1 .. x_{n-1}``.

The A-hat class is a product of ``u / sinh u`` factors while the Verlinde integrand carries
``u / sin u``.  The two are related by ``u -> I u``, which on an even series multiplies the
degree ``2d`` part by ``(-1)^d``; ``wick_rotate`` performs that substitution exactly.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import factorial

from gmpy2 import mpq

from .exact import RationalPolynomial
from .series import QQ, LaurentSeries, TruncationError, gen_cot_formal_level
from .verlinde import (
    LevelPolynomial,
    cartan_vars,
    level_prefactor,
    orientation_sign,
    root_product,
    verlinde_polynomial,
    weyl_residue,
    weyl_truncations,
)

__all__ = [
    "IntersectionQuery",
    "AhatSeries",
    "RiemannRochReport",
    "ahat_series",
    "wick_rotate",
    "intersection_pairing",
    "riemann_roch_check",
]


@dataclass(frozen=True)
class IntersectionQuery:
    """``level`` None keeps k symbolic; ``level_shift`` pairs against ``e^{(k + shift) omega}``."""

    n: int
    g: int
    insertion: LaurentSeries | int | None = None
    level: int | None = None
    level_shift: int = 0

    def __post_init__(self):
        if self.n < 2:
            raise ValueError("n must be at least 2")
        if self.g < 2:
            raise ValueError("intersection pairings need g >= 2")


@dataclass(frozen=True)
class AhatSeries:
    n: int
    g: int
    series: LaurentSeries

    @property
    def vars(self):
        return self.series.vars

    def constant_term(self):
        return dict(self.series.terms()).get(tuple(0 for _ in self.series.vars), mpq(0))


def _u_over_sinh_power(m: int, trunc: int) -> LaurentSeries:
    # sinh(u)/u = sum u^(2j) / (2j+1)!
    t = max(trunc, 1)
    base = LaurentSeries("w", 0, [mpq(e % 2 == 0, factorial(e + 1)) for e in range(t)], QQ)
    return base ** (-m)


def ahat_series(n: int, g: int, truncation=None) -> AhatSeries:
    """prod over positive roots of (u/sinh u)^(2(g-1)) in the Cartan variables.

    ``truncation`` gives per-variable windows; by default they are the ones needed for the
    pairing at genus ``g``.
    """
    if g < 1:
        raise ValueError("genus must be at least 1")
    m = 2 * (g - 1)
    T = list(truncation) if truncation is not None else weyl_truncations(n, m)
    if len(T) != n - 1:
        raise ValueError("one truncation order per Cartan variable")
    if m == 0:
        return AhatSeries(n, g, _constant_one(n, T))
    return AhatSeries(n, g, root_product(n, T, lambda supp, trunc: _u_over_sinh_power(m, trunc)))


def _constant_one(n, T):
    vars = cartan_vars(n)
    return LaurentSeries.monomial(vars, 0, 1, T[0])


def wick_rotate(P: LaurentSeries) -> LaurentSeries:
    """Substitute ``x -> I x`` in every variable of an even series.

    Raises ValueError when a term of odd total degree is present (the result would not
    be rational).
    """
    def rotate(exps, c):
        d = sum(exps)
        if d % 2:
            if c != 0:
                raise ValueError("odd total degree term: rotation leaves the rationals")
            return c
        return -c if (d // 2) % 2 else c

    return P.map_with_exponents(rotate)


def _check_power_series(P: LaurentSeries):
    for exps, _ in P.terms():
        if any(e < 0 for e in exps):
            raise ValueError("insertions must be power series (no negative exponents)")


def _pairing_polynomial(n: int, g: int, insertion) -> RationalPolynomial:
    m = 2 * (g - 1)
    scale = mpq(1)
    P = None
    if insertion is None:
        pass
    elif isinstance(insertion, LaurentSeries):
        _check_power_series(insertion)
        P = insertion
    else:
        scale = mpq(insertion)
    if scale == 0:
        return RationalPolynomial((), "k")
    cots = [lambda var, T: gen_cot_formal_level(var, T)] * (n - 1)
    denom = mpq(2) ** (-m)

    def root_factor(supp, trunc):
        return LaurentSeries.monomial("w", -m, denom, max(trunc, -m + 1))

    try:
        raw = weyl_residue(n, m, cots, insertion=P, root_factor=root_factor)
    except TruncationError as exc:
        raise TruncationError(f"insertion is not known to high enough order: {exc}") from exc
    if not isinstance(raw, RationalPolynomial):
        raw = RationalPolynomial([raw], "k")
    return raw * level_prefactor(n, g) * (orientation_sign(n, g) * scale)


def intersection_pairing(q: IntersectionQuery):
    """The pairing as a polynomial in k (shifted by ``level_shift``) or its value at ``level``."""
    poly = _pairing_polynomial(q.n, q.g, q.insertion)
    if q.level_shift:
        poly = poly.shift(q.level_shift)
    if q.level is not None:
        return poly(mpq(q.level))
    return LevelPolynomial(q.n, q.g, poly)


@dataclass(frozen=True)
class RiemannRochReport:
    n: int
    g: int
    pairing: LevelPolynomial
    shifted_verlinde: LevelPolynomial

    @property
    def ok(self) -> bool:
        return self.pairing.poly == self.shifted_verlinde.poly

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "g": self.g,
            "pairing": self.pairing.to_json(),
            "shifted_verlinde": self.shifted_verlinde.to_json(),
            "ok": self.ok,
        }


def riemann_roch_check(n: int, g: int) -> RiemannRochReport:
    """Compare the A-hat pairing against ``e^{(k+h) omega}`` with V(k + h), h = n."""
    if n not in (2, 3, 4):
        raise ValueError("the check is wired for n in {2, 3, 4}")
    h = n
    P = wick_rotate(ahat_series(n, g).series)
    Q = intersection_pairing(IntersectionQuery(n, g, P, level_shift=h))
    V = verlinde_polynomial(n, g)
    return RiemannRochReport(n, g, Q, LevelPolynomial(n, g, V.poly.shift(h)))
