"""Tornheim double sums S(a, b, c) = sum_{i,j>=1} i^-a j^-b (i+j)^-c and the constants
they feed into the large-level behaviour of Verlinde polynomials.

Three routes to S(2g, 2g, 2g):

* ``mzv_direct``: summation along the diagonals i + j = n with a certified tail bound;
* ``mzv_bernoulli``: (1/6) * integral over [0, 1] of the cube of the periodic Bernoulli
  function -(2 pi I)^n B_n(x) / n!, exact;
* ``mzv_residue``: (1/3) * Res_{x2} Res_{x1} cot(x1) cot(x2) (x1 x2 (x1 + x2))^(-2g), exact,
  the value being that rational times pi^(6g).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from math import comb, factorial

import mpmath
from gmpy2 import mpq

from .exact import PiPowerValue, bernoulli_polynomial, poly_integrate_unit_interval, zeta_even
from .series import LaurentSeries, gen_scaled_cot
from .verlinde import verlinde_polynomial, verlinde_sum, weyl_residue

__all__ = [
    "TornheimRequest",
    "TornheimResult",
    "LeadingReport",
    "mzv_direct",
    "mzv_bernoulli",
    "mzv_residue",
    "sl2_leading",
    "sl3_leading",
    "sl3_leading_check",
]


@dataclass(frozen=True)
class TornheimRequest:
    a: int
    b: int
    c: int
    target_error: float = 1e-15

    def __post_init__(self):
        if min(self.a, self.b, self.c) < 1:
            raise ValueError("exponents must be positive integers")
        if self.a + self.c < 2 or self.b + self.c < 2 or self.a + self.b + self.c < 3:
            raise ValueError(f"S({self.a},{self.b},{self.c}) diverges")
        if not self.target_error > 0:
            raise ValueError("target_error must be positive")


@dataclass(frozen=True)
class TornheimResult:
    value: mpmath.mpf
    error_bound: mpmath.mpf
    diagonals: int  # sums over i + j <= diagonals

    def __float__(self):
        return float(self.value)


def _zeta_bound(s: int, N: int) -> float:
    # sum_{i<=N} i^-s
    return 1.0 + math.log(N) if s == 1 else float(mpmath.zeta(s))


def _tail_bound(a: int, b: int, c: int, N: int) -> float:
    """Upper bound for sum_{n>N} n^-c h(n), h(n) = sum_{0<i<n} i^-a (n-i)^-b.

    Splitting at i = n/2 gives h(n) <= 2^b zeta_a(n) n^-b + 2^a zeta_b(n) n^-a, where
    zeta_s(n) is zeta(s) or 1 + log n for s = 1; the sum over n is then compared with an
    integral.  A factor 2 of slack is kept.
    """
    total = 0.0
    for s, p in ((a, b + c), (b, a + c)):
        w = 2.0 ** (a + b + c - p)  # 2^b for the first half, 2^a for the second
        if s == 1:
            # int_N^inf (1 + log x) x^-p dx
            tail = N ** (1 - p) * ((1 + math.log(N)) / (p - 1) + 1 / (p - 1) ** 2)
        else:
            tail = float(mpmath.zeta(s)) * N ** (1 - p) / (p - 1)
        total += w * tail
    return 2 * total


def _choose_diagonals(a, b, c, target):
    N = 2
    while _tail_bound(a, b, c, N) > target:
        N *= 2
    lo, hi = N // 2, N
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if _tail_bound(a, b, c, mid) > target:
            lo = mid
        else:
            hi = mid
    return max(hi, 2)


def mzv_direct(req: TornheimRequest, precision_bits: int = 256, diagonals: int | None = None) -> TornheimResult:
    """Partial sum over i + j <= N plus a certified bound on the omitted tail.

    Each diagonal uses the partial fraction decomposition of x^-a (n-x)^-b, so the inner sum
    reduces to generalised harmonic numbers H^(r)_{n-1} updated incrementally.
    """
    a, b, c = req.a, req.b, req.c
    N = diagonals if diagonals is not None else _choose_diagonals(a, b, c, req.target_error / 2)
    ctx = mpmath.MPContext()
    ctx.prec = precision_bits
    # coefficient of n^-(a+b-r) H^(r)_{n-1}, r = 1 .. max(a, b)
    weights = [0] * (max(a, b) + 1)
    for r in range(1, a + 1):
        weights[r] += comb(a + b - r - 1, b - 1)
    for s in range(1, b + 1):
        weights[s] += comb(a + b - s - 1, a - 1)
    R = len(weights) - 1
    H = [ctx.mpf(0)] * (R + 1)
    total = ctx.mpf(0)
    for n in range(2, N + 1):
        inv = ctx.mpf(1) / (n - 1)
        p = inv
        for r in range(1, R + 1):
            H[r] += p
            p *= inv
        ninv = ctx.mpf(1) / n
        h = ctx.mpf(0)
        for r in range(1, R + 1):
            if weights[r]:
                h += weights[r] * H[r] * ninv ** (a + b - r)
        total += h * ninv ** c
    rounding = ctx.ldexp(total, -precision_bits + 2 * max(N, 1).bit_length() + 8)
    bound = ctx.mpf(_tail_bound(a, b, c, N)) + rounding
    return TornheimResult(total, bound, N)


def mzv_bernoulli(g: int) -> PiPowerValue:
    """S(2g, 2g, 2g) exactly, from the cube of the periodic Bernoulli function."""
    if g < 1:
        raise ValueError("g must be at least 1")
    n = 2 * g
    B = bernoulli_polynomial(n)
    integral = poly_integrate_unit_interval(B * B * B)
    # (-(2 pi I)^n / n!)^3 = -(-1)^g (2 pi)^(6g) / (n!)^3
    sign = -((-1) ** g)
    coeff = sign * mpq(2) ** (3 * n) * integral / mpq(factorial(n)) ** 3 / 6
    return PiPowerValue(coeff, 3 * n)


def mzv_residue(g: int) -> mpq:
    """q with S(2g, 2g, 2g) = q pi^(6g): one third of Res cot x cot y (x y (x+y))^(-2g)."""
    if g < 1:
        raise ValueError("g must be at least 1")
    m = 2 * g
    cots = [lambda var, T: gen_scaled_cot(var, T, 1)] * 2

    def root_factor(supp, trunc):
        return LaurentSeries.monomial("w", -m, 1, max(trunc, -m + 1))

    return mpq(weyl_residue(3, m, cots, root_factor=root_factor)) / 3


def sl2_leading(g: int) -> mpq:
    """2 zeta(2(g-1)) / (2 pi^2)^(g-1), a rational."""
    if g < 2:
        raise ValueError("g must be at least 2")
    z = zeta_even(g - 1)
    return 2 * z.coefficient / mpq(2) ** (g - 1)


def sl3_leading(g: int) -> mpq:
    """Predicted k^(8(g-1)) coefficient of the SL_3 polynomial: 3^g S(m,m,m) / (64^(g-1) pi^(6(g-1)))."""
    if g < 2:
        raise ValueError("g must be at least 2")
    q = mzv_bernoulli(g - 1).coefficient
    return mpq(3) ** g * q / mpq(64) ** (g - 1)


@dataclass
class LeadingReport:
    g: int
    polynomial_coefficient: mpq
    predicted: mpq
    ratios: list = field(default_factory=list)  # (k, V_k / k^deg as float)

    @property
    def exact_match(self) -> bool:
        return self.polynomial_coefficient == self.predicted


def sl3_leading_check(g: int, k_range=()) -> LeadingReport:
    """Compare the top coefficient of the SL_3 polynomial with the Tornheim prediction, and
    record V_k / k^(8(g-1)) from trigonometric sums for the given levels."""
    P = verlinde_polynomial(3, g)
    report = LeadingReport(g, P.poly.leading_coefficient(), sl3_leading(g))
    deg = 8 * (g - 1)
    for k in k_range:
        report.ratios.append((k, verlinde_sum(3, k, g) / k ** deg))
    return report
