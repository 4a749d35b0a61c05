"""Level-l fusion algebra of SL_n (n = 2, 3) realised as functions on a finite measured set.

A spectral point is a regular torus element t = diag(e^{2 pi I theta_1}, ..., e^{2 pi I theta_n})
with t^(l+n) central, taken up to permutation.  Writing K = l + n, theta_i = p_i / (n K)
with all p_i congruent mod n, sum p_i = 0 mod nK and the p_i distinct mod nK.  The measure
is prod_{i<j} 4 sin^2(pi (theta_i - theta_j)) / (n K^(n-1)) and characters come from the
Weyl alternant ratio.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product

import mpmath
from gmpy2 import mpq

from .verlinde import DEFAULT_PRECISION, GUARD_BITS, RoundingGuardError, guarded_round

__all__ = [
    "SpectralPoint",
    "FusionAlgebra",
    "FusionCoefficients",
    "FusionRuleReport",
    "build_fusion",
    "level_weights",
    "dual_weight",
    "format_weight",
    "parse_weight",
    "fusion_coefficients",
    "genus_correlator",
    "fusion_rule_check",
    "orthonormality_residual",
    "clebsch_gordan_su2",
]


@dataclass(frozen=True, order=True)
class SpectralPoint:
    theta: tuple  # n rationals in [0, 1), sorted; t = diag(exp(2 pi I theta_i))
    regular: bool = True

    @property
    def angles(self) -> tuple:
        """The first n-1 eigenvalue angles as rational multiples of pi."""
        return tuple(2 * t for t in self.theta[:-1])


def level_weights(n: int, l: int) -> list[tuple[int, ...]]:
    """Dominant weights (Dynkin labels) with label sum <= l."""
    out = [w for w in product(range(l + 1), repeat=n - 1) if sum(w) <= l]
    return sorted(out, key=lambda w: (sum(w), tuple(-x for x in w)))


def dual_weight(w: tuple) -> tuple:
    return tuple(reversed(w))


def format_weight(w: tuple) -> str:
    return ",".join(str(x) for x in w)


def parse_weight(text: str) -> tuple[int, ...]:
    return tuple(int(x) for x in str(text).split(","))


def _spectral_points(n: int, l: int) -> list[SpectralPoint]:
    K = l + n
    N = n * K
    seen = set()
    for p1 in range(N):
        for rest in product(range(p1 % n, N, n), repeat=n - 2):
            ps = (p1,) + rest
            last = (-sum(ps)) % N
            ps = ps + (last,)
            if len(set(ps)) < n:
                continue
            seen.add(tuple(sorted(ps)))
    return [SpectralPoint(tuple(mpq(p, N) for p in ps)) for ps in sorted(seen)]


@dataclass
class FusionAlgebra:
    n: int
    level: int
    points: list
    measure: list
    weights: list
    characters: dict  # weight -> list of complex values, one per point
    precision_bits: int = DEFAULT_PRECISION
    ctx: object = field(default=None, repr=False)

    @property
    def h(self) -> int:
        return self.n

    @property
    def shifted_level(self) -> int:
        return self.level + self.n

    def index(self, w) -> tuple:
        w = parse_weight(w) if isinstance(w, str) else tuple(w)
        if w not in self.characters:
            raise KeyError(f"weight {format_weight(w)} is not at level {self.level}")
        return w

    def total_mass(self):
        return self.ctx.fsum(self.measure)


def _character(ctx, zs, w, n):
    parts = [sum(w[i:]) for i in range(n - 1)] + [0]
    num = ctx.matrix([[z ** (parts[i] + n - 1 - i) for z in zs] for i in range(n)])
    den = ctx.matrix([[z ** (n - 1 - i) for z in zs] for i in range(n)])
    d = ctx.det(den)
    if abs(d) < ctx.ldexp(1, -ctx.prec // 2):
        raise ZeroDivisionError("Weyl denominator vanishes: the point is not regular")
    return ctx.det(num) / d


def build_fusion(n: int, level: int, precision_bits: int = DEFAULT_PRECISION) -> FusionAlgebra:
    if n not in (2, 3):
        raise ValueError("fusion algebras are implemented for n = 2, 3")
    if level < 0:
        raise ValueError("level must be non-negative")
    ctx = mpmath.MPContext()
    ctx.prec = precision_bits
    K = level + n
    points = _spectral_points(n, level)
    weights = level_weights(n, level)
    if len(points) != len(weights):
        raise AssertionError(f"{len(points)} spectral points but {len(weights)} level-{level} weights")
    measure = []
    zs_all = []
    for pt in points:
        th = [ctx.mpf(int(t.numerator)) / int(t.denominator) for t in pt.theta]
        mu = ctx.mpf(1)
        for i in range(n):
            for j in range(i + 1, n):
                mu *= 4 * ctx.sinpi(th[i] - th[j]) ** 2
        measure.append(mu / (n * K ** (n - 1)))
        zs_all.append([ctx.expjpi(2 * t) for t in th])
    chars = {w: [_character(ctx, zs, w, n) for zs in zs_all] for w in weights}
    return FusionAlgebra(n, level, points, measure, weights, chars, precision_bits, ctx)


def orthonormality_residual(F: FusionAlgebra):
    """max |<chi_a, chi_b> - delta_ab| for the hermitian pairing sum chi_a conj(chi_b) mu."""
    ctx = F.ctx
    worst = ctx.mpf(0)
    for a in F.weights:
        for b in F.weights:
            s = ctx.fsum(x * ctx.conj(y) * m for x, y, m in zip(F.characters[a], F.characters[b], F.measure))
            worst = max(worst, abs(s - (1 if a == b else 0)))
    return worst


@dataclass(frozen=True)
class FusionCoefficients:
    """``N[(a, b, c)]`` is the multiplicity of c in a * b."""

    n: int
    level: int
    weights: tuple
    table: dict

    def __getitem__(self, abc) -> int:
        a, b, c = (parse_weight(x) if isinstance(x, str) else tuple(x) for x in abc)
        return self.table[(a, b, c)]

    def tensor(self) -> list:
        W = self.weights
        return [[[self.table[(a, b, c)] for c in W] for b in W] for a in W]

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "level": self.level,
            "weights": [format_weight(w) for w in self.weights],
            "tensor": [[[str(x) for x in row] for row in plane] for plane in self.tensor()],
        }


def fusion_coefficients(F: FusionAlgebra, guard_bits: int = GUARD_BITS) -> FusionCoefficients:
    ctx = F.ctx
    table = {}
    for a in F.weights:
        for b in F.weights:
            ab = [x * y * m for x, y, m in zip(F.characters[a], F.characters[b], F.measure)]
            for c in F.weights:
                v = ctx.fsum(x * ctx.conj(z) for x, z in zip(ab, F.characters[c]))
                N = guarded_round(v, guard_bits)
                if N < 0:
                    raise RoundingGuardError(f"negative fusion coefficient N_{a},{b}^{c} = {N}")
                table[(a, b, c)] = N
    return FusionCoefficients(F.n, F.level, tuple(F.weights), table)


def genus_correlator(F: FusionAlgebra, g: int, insertions=()):
    """sum_s mu(s)^(1-g) prod_i chi_{v_i}(s)."""
    if g < 0:
        raise ValueError("genus must be non-negative")
    ins = [F.index(w) for w in insertions]
    ctx = F.ctx
    terms = []
    for s, mu in enumerate(F.measure):
        v = mu ** (1 - g)
        for w in ins:
            v *= F.characters[w][s]
        terms.append(v)
    return ctx.fsum(terms)


@dataclass
class FusionRuleReport:
    g: int
    insertions: tuple
    lhs: object
    rhs: object
    deviation: object


def fusion_rule_check(F: FusionAlgebra, g: int, insertions=()) -> FusionRuleReport:
    """F(g)_{v...} against sum over the character basis of F(g-1)_{u_i, u^i, v...}."""
    if g < 1:
        raise ValueError("the recursion needs g >= 1")
    ins = tuple(F.index(w) for w in insertions)
    lhs = genus_correlator(F, g, ins)
    rhs = F.ctx.fsum(genus_correlator(F, g - 1, (w, dual_weight(w)) + ins) for w in F.weights)
    return FusionRuleReport(g, ins, lhs, rhs, abs(lhs - rhs))


def clebsch_gordan_su2(a: int, b: int, c: int, level: int) -> int:
    """Truncated Clebsch-Gordan rule for SL_2 at the given level."""
    return int(abs(a - b) <= c <= min(a + b, 2 * level - a - b) and (a + b + c) % 2 == 0)
