"""SL_n Verlinde numbers: trigonometric sums, level polynomials from iterated residues,
and the SL_3 residue matrix.

Conventions: ``n`` is the rank-plus-one of SL_n, ``g`` the genus and ``k`` the level
entering the roots of unity (the fusion algebra of level ``k - n``).  Cartan variables
``x1 .. x_{n-1}`` are labelled along the Dynkin chain; the positive roots are the
contiguous sums ``x_i + ... + x_j``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from itertools import product

import mpmath
from gmpy2 import mpq

from .exact import RationalPolynomial, format_rational, parse_rational
from .series import (
    QQ,
    ComplexField,
    LaurentSeries,
    compose_linear,
    flag_truncations,
    gen_cot_formal_level,
    gen_scaled_cot,
    gen_shifted_sin,
    residue_of_product,
)

__all__ = [
    "RoundingGuardError",
    "VerificationError",
    "VerlindeParams",
    "LevelPolynomial",
    "ResidueMatrix",
    "EquivalenceReport",
    "positive_roots",
    "guarded_round",
    "verlinde_sum",
    "verlinde_polynomial",
    "weyl_residue",
    "orientation_sign",
    "level_prefactor",
    "root_product",
    "weyl_truncations",
    "cartan_vars",
    "residue_matrix",
    "residue_matrix_values",
    "verify_equivalence",
]

DEFAULT_PRECISION = 256
GUARD_BITS = 64


class RoundingGuardError(ArithmeticError):
    """A value that must be an integer is farther than 2**-64 from one."""


class VerificationError(AssertionError):
    """Two independent routes disagree."""


@dataclass(frozen=True)
class VerlindeParams:
    n: int
    g: int
    k: int | None = None

    def __post_init__(self):
        if self.n < 2:
            raise ValueError("n must be at least 2")
        if self.g < 0:
            raise ValueError("genus must be non-negative")
        if self.k is not None and self.k < 2:
            raise ValueError("level k must be at least 2")

    @property
    def rank(self) -> int:
        return self.n - 1

    @property
    def dual_coxeter(self) -> int:
        return self.n

    @property
    def num_positive_roots(self) -> int:
        return self.n * (self.n - 1) // 2

    @property
    def center_order(self) -> int:
        return self.n

    @property
    def dimension(self) -> int:
        return self.n * self.n - 1


def positive_roots(n: int) -> list[tuple[int, ...]]:
    """Supports ``(i, ..., j)`` (0-based simple-root indices) of the positive roots of SL_n."""
    r = n - 1
    return [tuple(range(i, j + 1)) for i in range(r) for j in range(i, r)]


def guarded_round(x, guard_bits: int = GUARD_BITS, slack_bits: int = 16) -> int:
    """Nearest integer to a real (or numerically real) mpmath value, or raise.

    Besides the distance test, the magnitude of ``x`` must leave ``guard_bits + slack_bits``
    fractional bits inside the working precision; otherwise the distance to the nearest
    integer certifies nothing (every large float is an integer).
    """
    ctx = getattr(x, "context", mpmath.mp)
    re = ctx.re(x)
    im = ctx.im(x)
    if ctx.mag(x) + guard_bits + slack_bits > ctx.prec:
        raise RoundingGuardError(
            f"{ctx.prec}-bit precision cannot certify a value of magnitude 2^{ctx.mag(x)} to 2^-{guard_bits}"
        )
    tol = ctx.ldexp(1, -guard_bits)
    n = int(ctx.nint(re))
    if abs(re - n) > tol or abs(im) > tol:
        raise RoundingGuardError(f"value {ctx.nstr(x, 30)} is not within 2^-{guard_bits} of an integer")
    return n


def _compositions(parts: int, total_max: int):
    """Tuples of ``parts`` positive integers with sum <= total_max."""
    if parts == 0:
        yield ()
        return
    for a in range(1, total_max - parts + 2):
        for rest in _compositions(parts - 1, total_max - a):
            yield (a,) + rest


def verlinde_sum(n: int, k: int, g: int, precision_bits: int = DEFAULT_PRECISION,
                 guard_bits: int = GUARD_BITS) -> int:
    """V_k^{SL_n}(g) = (n k^(n-1))^(g-1) * sum over the open alcove of
    prod_{i<=j} (2 sin(pi (a_i + ... + a_j) / k))^(-2(g-1)).

    For n = 2, 3 this is the classical sum; for larger n it is the same sum over
    regular torus points of order dividing k modulo the center.
    """
    VerlindeParams(n, g, k)
    if precision_bits < 64:
        raise ValueError("precision must be at least 64 bits")
    ctx = mpmath.MPContext()
    ctx.prec = precision_bits
    two_sin = [None] + [2 * ctx.sinpi(ctx.mpf(a) / k) for a in range(1, k)]
    roots = positive_roots(n)
    m = 2 * (g - 1)
    total = ctx.mpf(0)
    for a in _compositions(n - 1, k - 1):
        prefix = [0]
        for x in a:
            prefix.append(prefix[-1] + x)
        w = ctx.mpf(1)
        for supp in roots:
            w *= two_sin[prefix[supp[-1] + 1] - prefix[supp[0]]]
        total += w ** (-m)
    total *= ctx.mpf(n * k ** (n - 1)) ** (g - 1)
    return guarded_round(total, guard_bits)


@dataclass(frozen=True)
class LevelPolynomial:
    """V_k^{SL_n}(g) as an exact polynomial in the level ``k``."""

    n: int
    g: int
    poly: RationalPolynomial

    @property
    def degree(self) -> int:
        return self.poly.degree

    def __call__(self, k) -> mpq:
        return self.poly(mpq(k))

    def evaluate_integer(self, k: int) -> int:
        v = self(k)
        if v.denominator != 1:
            raise VerificationError(f"V({k}) = {format_rational(v)} is not an integer")
        return int(v)

    def coefficients(self) -> list[mpq]:
        return list(self.poly.coeffs)

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "g": self.g,
            "coefficients": [{"power": i, "value": format_rational(c)} for i, c in enumerate(self.poly.coeffs)],
        }

    @classmethod
    def from_json(cls, data: dict) -> "LevelPolynomial":
        deg = max((int(t["power"]) for t in data["coefficients"]), default=-1)
        cs = [mpq(0)] * (deg + 1)
        for t in data["coefficients"]:
            cs[int(t["power"])] = parse_rational(t["value"])
        return cls(int(data["n"]), int(data["g"]), RationalPolynomial(cs, "k"))

    def __str__(self):
        return str(self.poly)


def _sin_power_factor(var: str, m: int, trunc: int, shift=0, ring=QQ) -> LaurentSeries:
    """(2 sin(pi*shift + w))^(-m) known below w^trunc."""
    probe = gen_shifted_sin(var, 1, shift, ring)
    vanishes = ring.is_zero(probe.coefficient(0))
    s = gen_shifted_sin(var, trunc + (m + 1) * vanishes, shift, ring) * 2
    return (s ** (-m)).truncate(trunc)


def _fold_residues(R, cots):
    """Res_{x_r} ... Res_{x_1} of R * prod_i cots[i], one variable at a time."""
    for cot in cots:
        if isinstance(R, LaurentSeries) and R.var == cot.var:
            R = residue_of_product(R, cot)
        else:
            # R is constant in this variable: the residue vanishes
            return cot.ring.zero
    return R


def cartan_vars(n: int) -> tuple[str, ...]:
    return tuple(f"x{i + 1}" for i in range(n - 1))


def weyl_truncations(n: int, m: int, shifts=None) -> list[int]:
    """Per-variable windows for residues of ``prod cot(x_i) * prod_roots f_root(u_root)``
    where each root factor has a pole of order ``m`` unless its shift is non-integral."""
    shifts = shifts or {}
    factors = [((i,), -1) for i in range(n - 1)]
    for supp in positive_roots(n):
        c = mpq(shifts.get(supp, 0))
        factors.append((supp, -m if c.denominator == 1 else 0))
    return flag_truncations(n - 1, factors, target=-1)


def root_product(n: int, T, root_factor) -> LaurentSeries:
    """prod over positive roots of ``root_factor(supp, trunc)`` composed with the root's linear form.

    ``root_factor`` returns a univariate series in any variable, known below ``trunc``.
    """
    vars = cartan_vars(n)
    roots = positive_roots(n)
    D = None
    for start in reversed(range(n - 1)):
        for supp in roots:
            if supp[0] != start:
                continue
            f_trunc = 1 + sum(T[t] - 1 for t in supp)
            f = root_factor(supp, f_trunc)
            F = compose_linear(f, [vars[t] for t in supp], [T[t] for t in supp], ambient=vars[start:])
            D = F if D is None else F * D
    return D


def weyl_residue(n: int, m: int, cots, ring=QQ, shifts=None, insertion=None, root_factor=None):
    """Iterated residue at the origin of ``prod_i cots[i](x_i) * prod_roots (2 sin(u_root + c_root))^-m``.

    ``cots[i]`` are univariate series in ``x{i+1}`` with a simple pole, or callables
    ``(var, trunc) -> series``; ``shifts`` maps a root support to a rational multiple of pi
    (default 0).  ``root_factor(supp, trunc)`` replaces the sine factor and ``insertion``
    (a power series in the Cartan variables) multiplies the integrand.  Residues are taken
    with ``x1`` innermost.  Truncations come from the pole orders of all factors.
    """
    shifts = shifts or {}
    vars = cartan_vars(n)
    T = weyl_truncations(n, m, shifts)
    if root_factor is None:
        def root_factor(supp, trunc):
            return _sin_power_factor("w", m, trunc, shifts.get(supp, 0), ring)
    D = root_product(n, T, root_factor)
    if insertion is not None:
        D = D * insertion
    cot_series = [c(vars[i], T[i]) if callable(c) else c for i, c in enumerate(cots)]
    return _fold_residues(D, cot_series)


def _calibration_level(n: int) -> int:
    # smallest level with a non-empty alcove sum
    return n


@lru_cache(maxsize=None)
def orientation_sign(n: int, g: int) -> int:
    """Overall sign of the level-polynomial residue, calibrated once against ``verlinde_sum``."""
    return _calibrate(n, g)[1]


def _raw_level_residue(n: int, g: int) -> RationalPolynomial:
    m = 2 * (g - 1)
    cots = [lambda var, T: gen_cot_formal_level(var, T)] * (n - 1)
    raw = weyl_residue(n, m, cots)
    if not isinstance(raw, RationalPolynomial):
        raw = RationalPolynomial([raw], "k")
    return raw * level_prefactor(n, g)


def level_prefactor(n: int, g: int) -> RationalPolynomial:
    """(n k^(n-1))^(g-1)."""
    return RationalPolynomial.monomial((n - 1) * (g - 1), mpq(n) ** (g - 1))


@lru_cache(maxsize=None)
def _calibrate(n: int, g: int):
    if n < 2:
        raise ValueError("n must be at least 2")
    if g < 2:
        raise ValueError("the residue route needs g >= 2")
    raw = _raw_level_residue(n, g)
    k0 = _calibration_level(n)
    target = verlinde_sum(n, k0, g)
    value = raw(mpq(k0))
    if value == target:
        return raw, 1
    if value == -target:
        return raw, -1
    raise VerificationError(
        f"residue polynomial gives {format_rational(value)} at k={k0}, trigonometric sum gives {target}"
    )


@lru_cache(maxsize=None)
def verlinde_polynomial(n: int, g: int) -> LevelPolynomial:
    """V_k^{SL_n}(g) as a polynomial in k via the exponential-substitution residue.

    V = sign * (n k^(n-1))^(g-1) Res_{x_{n-1}} ... Res_{x_1}
        prod_i k cot(k x_i) / prod_{roots} (2 sin u_root)^(2(g-1)).
    The overall sign is fixed once against ``verlinde_sum`` at k = n.
    """
    raw, sign = _calibrate(n, g)
    return LevelPolynomial(n, g, raw * sign)


@dataclass(frozen=True)
class ResidueMatrix:
    k: int
    g: int
    entries: tuple[tuple[int, ...], ...]

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i][j]

    def rows(self) -> list[list[int]]:
        return [list(r) for r in self.entries]

    def column_sums(self) -> list[int]:
        return [sum(r[j] for r in self.entries) for j in range(self.k)]


def residue_entry(k: int, g: int, i: int, j: int, field: ComplexField):
    """Residue of the SL_3 form (with the (3k^2)^(g-1) prefactor) at (e^{i pi I/k}, e^{j pi I/k}).

    With X = e^{I(i pi/k + u)}, Y = e^{I(j pi/k + v)} the form becomes
    k^2 cot(k u) cot(k v) du dv / (8 sin(a+u) sin(b+v) sin(a+b+u+v))^(2(g-1)).
    """
    m = 2 * (g - 1)
    shifts = {(0,): mpq(i, k), (1,): mpq(j, k), (0, 1): mpq(i + j, k)}
    cots = [lambda var, T: gen_scaled_cot(var, T, k, field)] * 2
    value = weyl_residue(3, m, cots, ring=field, shifts=shifts)
    return value * field.coerce(mpq(3 * k * k) ** (g - 1))


def residue_matrix_values(k: int, g: int, precision_bits: int = DEFAULT_PRECISION) -> list[list]:
    """Unrounded residues of the SL_3 form at every p_ij.

    Interior entries are algebraic numbers in general (k = 5 already gives values in
    Q(sqrt 5)); entry (0, 0) is always the integer V_k(g).
    """
    if k < 2:
        raise ValueError("k must be at least 2")
    if g < 2:
        raise ValueError("g must be at least 2")
    field = ComplexField(precision_bits)
    return [[residue_entry(k, g, i, j, field) for j in range(k)] for i in range(k)]


def residue_matrix(k: int, g: int, precision_bits: int = DEFAULT_PRECISION,
                   guard_bits: int = GUARD_BITS) -> ResidueMatrix:
    """M_k(g) with integer entries; raises RoundingGuardError if some entry is not an integer."""
    values = residue_matrix_values(k, g, precision_bits)
    rows = tuple(tuple(guarded_round(v, guard_bits) for v in row) for row in values)
    return ResidueMatrix(k, g, rows)


@dataclass
class EquivalenceReport:
    n: int
    g: int
    rows: list = field(default_factory=list)  # (k, polynomial value, sum value, ok)

    @property
    def ok(self) -> bool:
        return all(r[3] for r in self.rows)


def verify_equivalence(n: int, g: int, k_range, precision_bits: int = DEFAULT_PRECISION) -> EquivalenceReport:
    """Compare the residue polynomial with the trigonometric sum at each level."""
    if g < 2:
        raise ValueError("the polynomial route requires g >= 2")
    P = verlinde_polynomial(n, g)
    report = EquivalenceReport(n, g)
    for k in k_range:
        pv = P(k)
        sv = verlinde_sum(n, k, g, precision_bits)
        report.rows.append((k, pv, sv, pv == sv))
    return report
