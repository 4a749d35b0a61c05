"""Truncated (nested) Laurent series over a pluggable coefficient ring, and iterated residues.

A :class:`LaurentSeries` in ``vars[0]`` stores exact coefficients for the exponents
``floor .. trunc - 1``.  Coefficients below ``floor`` are exactly zero; nothing is
known at or above ``trunc``.  When ``len(vars) > 1`` the coefficients are elements of
the ring of series in ``vars[1:]`` (a nested series), or exact base scalars, which
stand for constants in the remaining variables.

Every operation computes the window its result is guaranteed on.  Reading a
coefficient outside that window raises :class:`TruncationError` instead of returning
a wrong number, so under-truncated residue computations fail loudly.

Nesting order is residue order: ``vars[0]`` is the innermost residue.  Expansions of
mixed factors such as ``1/(x + y)`` around ``x = 0`` take the coefficients in the
``y`` series ring, i.e. the region ``|x| << |y|``.
"""

from __future__ import annotations

from math import comb, factorial

import mpmath
from gmpy2 import mpq

from .exact import RationalPolynomial, bernoulli_number

__all__ = [
    "TruncationError",
    "NotInvertibleError",
    "RationalField",
    "PolynomialRing",
    "ComplexField",
    "QQ",
    "LaurentSeries",
    "NestedLaurentSeries",
    "series_mul",
    "series_invert",
    "series_int_pow",
    "residue",
    "iterated_residue",
    "residue_of_product",
    "gen_named_series",
    "gen_cot_formal_level",
    "gen_scaled_cot",
    "gen_shifted_sin",
    "compose_linear",
    "flag_truncations",
    "series_from_terms",
]


class TruncationError(ArithmeticError):
    """A coefficient outside the exactly-known window was requested."""


class NotInvertibleError(ArithmeticError):
    pass


# ---------------------------------------------------------------- rings


class RationalField:
    name = "QQ"
    zero = mpq(0)
    one = mpq(1)

    def coerce(self, x):
        if isinstance(x, RationalPolynomial):
            if not x.is_constant():
                raise TypeError("non-constant polynomial is not rational")
            return x.coefficient(0)
        return mpq(x)

    def is_zero(self, x) -> bool:
        return x == 0

    def inverse(self, x):
        if x == 0:
            raise NotInvertibleError("division by zero")
        return 1 / mpq(x)

    def __repr__(self):
        return "QQ"


class PolynomialRing:
    """Polynomials in a formal symbol (the level ``k``) over QQ."""

    def __init__(self, var: str = "k"):
        self.var = var
        self.zero = RationalPolynomial((), var)
        self.one = RationalPolynomial([1], var)
        self.name = f"QQ[{var}]"

    def coerce(self, x):
        if isinstance(x, RationalPolynomial):
            return x
        return RationalPolynomial([mpq(x)], self.var)

    def is_zero(self, x) -> bool:
        return x == 0

    def inverse(self, x):
        x = self.coerce(x)
        if x.is_zero() or not x.is_constant():
            raise NotInvertibleError(f"{x} is not a unit in {self.name}")
        return RationalPolynomial([1 / x.coefficient(0)], self.var)

    def __eq__(self, other):
        return isinstance(other, PolynomialRing) and other.var == self.var

    def __hash__(self):
        return hash(("poly", self.var))

    def __repr__(self):
        return self.name


_complex_fields: dict[int, "ComplexField"] = {}


class ComplexField:
    """Binary floating complex numbers at a fixed working precision.

    Zero tests use ``|x| < 2**-tol_bits`` (default ``prec // 2``).
    """

    def __init__(self, prec: int = 256, tol_bits: int | None = None):
        if prec < 64:
            raise ValueError("precision must be at least 64 bits")
        self.prec = prec
        self.ctx = mpmath.MPContext()
        self.ctx.prec = prec
        self.tol_bits = prec // 2 if tol_bits is None else tol_bits
        self.tol = self.ctx.ldexp(1, -self.tol_bits)
        self.zero = self.ctx.mpc(0)
        self.one = self.ctx.mpc(1)
        self.name = f"CC[{prec}]"
        _complex_fields[id(self.ctx)] = self

    def coerce(self, x):
        ctx = self.ctx
        if isinstance(x, RationalPolynomial):
            if not x.is_constant():
                raise TypeError("non-constant polynomial is not a complex number")
            x = x.coefficient(0)
        if isinstance(x, type(mpq(0))):
            return ctx.mpc(ctx.mpf(int(x.numerator)) / int(x.denominator))
        return ctx.mpc(x)

    def is_zero(self, x) -> bool:
        if isinstance(x, (int, type(mpq(0)))):
            return x == 0
        return abs(x) < self.tol

    def inverse(self, x):
        if self.is_zero(x):
            raise NotInvertibleError("division by (numerical) zero")
        return 1 / self.coerce(x)

    def __repr__(self):
        return self.name


QQ = RationalField()


def _ring_of(x):
    if isinstance(x, LaurentSeries):
        return x.ring
    if isinstance(x, RationalPolynomial):
        return PolynomialRing(x.var) if not x.is_constant() else QQ
    if isinstance(x, (mpmath.mpc, mpmath.mpf)) or hasattr(x, "context"):
        ctx = getattr(x, "context", None)
        if ctx is not None and id(ctx) in _complex_fields:
            return _complex_fields[id(ctx)]
        raise TypeError("complex scalar from an unregistered context")
    return QQ


def _join(r1, r2):
    if r1 is r2 or r1 == r2:
        return r1
    if r1 is QQ:
        return r2
    if r2 is QQ:
        return r1
    if isinstance(r1, PolynomialRing) and isinstance(r2, PolynomialRing):
        raise TypeError(f"cannot combine {r1} and {r2}")
    raise TypeError(f"cannot combine {r1} and {r2}")


def _is_exact_zero(c, ring) -> bool:
    return not isinstance(c, LaurentSeries) and ring.is_zero(c)


def _merge_vars(a: tuple, b: tuple) -> tuple:
    if a[: len(b)] == b:
        return a
    if b[: len(a)] == a:
        return b
    raise ValueError(f"incompatible variable orders {a} and {b}")


# ---------------------------------------------------------------- series


class LaurentSeries:
    __slots__ = ("vars", "floor", "coeffs", "ring")

    def __init__(self, vars, floor: int, coeffs, ring=QQ, normalize: bool = True):
        if isinstance(vars, str):
            vars = (vars,)
        self.vars = tuple(vars)
        if not self.vars:
            raise ValueError("a series needs at least one variable")
        coeffs = list(coeffs)
        if not coeffs:
            raise ValueError("empty coefficient window (truncation_order must exceed floor)")
        self.ring = ring
        if normalize:
            i = 0
            while i < len(coeffs) - 1 and _is_exact_zero(coeffs[i], ring):
                i += 1
            if i:
                coeffs = coeffs[i:]
                floor += i
        self.floor = floor
        self.coeffs = coeffs

    # -- constructors

    @classmethod
    def monomial(cls, vars, exponent: int, coeff=1, trunc: int | None = None, ring=QQ):
        """``coeff * var**exponent`` known exactly below ``trunc``."""
        if trunc is None:
            trunc = exponent + 1
        if trunc <= exponent:
            raise ValueError("truncation must exceed the exponent")
        c = coeff if isinstance(coeff, LaurentSeries) else ring.coerce(coeff)
        return cls(vars, exponent, [c] + [ring.zero] * (trunc - exponent - 1), ring)

    @classmethod
    def one(cls, vars, trunc: int, ring=QQ):
        return cls.monomial(vars, 0, 1, trunc, ring)

    # -- basic properties

    @property
    def var(self) -> str:
        return self.vars[0]

    @property
    def trunc(self) -> int:
        return self.floor + len(self.coeffs)

    truncation_order = trunc

    @property
    def depth(self) -> int:
        return len(self.vars)

    def coefficient(self, n: int):
        if n < self.floor:
            return self.ring.zero
        if n >= self.trunc:
            raise TruncationError(f"coefficient {self.var}^{n} is beyond the window (trunc {self.trunc})")
        return self.coeffs[n - self.floor]

    __getitem__ = coefficient

    def is_zero(self) -> bool:
        """True when every coefficient in the window vanishes (the series is O(x^trunc))."""
        return all(
            c.is_zero() if isinstance(c, LaurentSeries) else self.ring.is_zero(c) for c in self.coeffs
        )

    def valuation(self) -> int:
        """Index of the first nonzero known coefficient (``trunc`` if none)."""
        for i, c in enumerate(self.coeffs):
            z = c.is_zero() if isinstance(c, LaurentSeries) else self.ring.is_zero(c)
            if not z:
                return self.floor + i
        return self.trunc

    def truncate(self, trunc: int) -> "LaurentSeries":
        if trunc >= self.trunc:
            return self
        if trunc <= self.floor:
            return LaurentSeries(self.vars, trunc - 1, [self.ring.zero], self.ring)
        return LaurentSeries(self.vars, self.floor, self.coeffs[: trunc - self.floor], self.ring)

    def _with(self, floor, coeffs, ring=None, vars=None):
        return LaurentSeries(vars or self.vars, floor, coeffs, ring or self.ring)

    def to_ring(self, ring) -> "LaurentSeries":
        if ring is self.ring or ring == self.ring:
            return self
        return LaurentSeries(
            self.vars,
            self.floor,
            [c.to_ring(ring) if isinstance(c, LaurentSeries) else ring.coerce(c) for c in self.coeffs],
            ring,
            normalize=False,
        )

    def map_coefficients(self, fn, ring=None) -> "LaurentSeries":
        """Apply ``fn`` to every base scalar (e.g. specialise the level symbol)."""
        ring = ring or self.ring
        return LaurentSeries(
            self.vars,
            self.floor,
            [c.map_coefficients(fn, ring) if isinstance(c, LaurentSeries) else fn(c) for c in self.coeffs],
            ring,
        )

    def map_with_exponents(self, fn, _prefix=()) -> "LaurentSeries":
        """Rebuild with ``fn(exponents, scalar)``; ``exponents`` lists the exponents of ``vars``
        seen so far.  Exact scalars sitting at a shallow level get a short tuple."""
        out = []
        for i, c in enumerate(self.coeffs):
            e = _prefix + (self.floor + i,)
            out.append(c.map_with_exponents(fn, e) if isinstance(c, LaurentSeries) else fn(e, c))
        return LaurentSeries(self.vars, self.floor, out, self.ring)

    def terms(self, _prefix=()):
        """Yield ``(exponents, scalar)`` for every nonzero known base coefficient."""
        for i, c in enumerate(self.coeffs):
            e = _prefix + (self.floor + i,)
            if isinstance(c, LaurentSeries):
                yield from c.terms(e)
            elif not self.ring.is_zero(c):
                yield e, c

    # -- relation between operands

    def _classify(self, other):
        """'same' (series op), 'scalar' (other is a coefficient) or 'outer'."""
        if not isinstance(other, LaurentSeries):
            return "scalar"
        if other.vars[0] == self.vars[0]:
            _merge_vars(self.vars, other.vars)
            return "same"
        if other.vars[0] in self.vars[1:]:
            i = self.vars.index(other.vars[0])
            _merge_vars(self.vars[i:], other.vars)
            return "scalar"
        if self.vars[0] in other.vars[1:]:
            return "outer"
        raise ValueError(f"incompatible variable orders {self.vars} and {other.vars}")

    def _scalar_vars(self, other):
        if not isinstance(other, LaurentSeries):
            return self.vars
        i = self.vars.index(other.vars[0])
        return self.vars[:i] + _merge_vars(self.vars[i:], other.vars)

    # -- arithmetic

    def __neg__(self):
        return self._with(self.floor, [-c for c in self.coeffs])

    def __add__(self, other):
        kind = self._classify(other)
        if kind == "outer":
            return other.__radd__(self)
        ring = _join(self.ring, _ring_of(other))
        a = self.to_ring(ring)
        if kind == "scalar":
            c = other if isinstance(other, LaurentSeries) else ring.coerce(other)
            vars = a._scalar_vars(other)
            if 0 >= a.trunc or _is_exact_zero(c, ring):
                return a._with(a.floor, a.coeffs, ring, vars)
            coeffs = list(a.coeffs)
            floor = a.floor
            if floor > 0:
                coeffs = [ring.zero] * floor + coeffs
                floor = 0
            coeffs[-floor] = _add(coeffs[-floor], c, ring)
            return LaurentSeries(vars, floor, coeffs, ring)
        b = other.to_ring(ring)
        vars = _merge_vars(a.vars, b.vars)
        floor = min(a.floor, b.floor)
        trunc = min(a.trunc, b.trunc)
        if trunc <= floor:
            return LaurentSeries(vars, trunc - 1, [ring.zero], ring)
        coeffs = []
        for n in range(floor, trunc):
            x = a.coeffs[n - a.floor] if n >= a.floor else None
            y = b.coeffs[n - b.floor] if n >= b.floor else None
            if x is None:
                coeffs.append(y)
            elif y is None:
                coeffs.append(x)
            else:
                coeffs.append(_add(x, y, ring))
        return LaurentSeries(vars, floor, coeffs, ring)

    def __radd__(self, other):
        return self.__add__(other)

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        kind = self._classify(other)
        if kind == "outer":
            return other.__rmul__(self)
        ring = _join(self.ring, _ring_of(other))
        a = self.to_ring(ring)
        if kind == "scalar":
            c = other if isinstance(other, LaurentSeries) else ring.coerce(other)
            vars = a._scalar_vars(other)
            if _is_exact_zero(c, ring):
                return LaurentSeries(vars, a.trunc - 1, [ring.zero], ring)
            return LaurentSeries(
                vars, a.floor, [ring.zero if _is_exact_zero(x, ring) else x * c for x in a.coeffs], ring
            )
        return _mul_series(a, other.to_ring(ring), ring)

    def __rmul__(self, other):
        return self.__mul__(other)

    def inverse(self) -> "LaurentSeries":
        ring = self.ring
        a = self.coeffs
        a0 = a[0]
        if isinstance(a0, LaurentSeries):
            b0 = a0.inverse()
        else:
            if ring.is_zero(a0):
                raise NotInvertibleError("leading coefficient is zero")
            b0 = ring.inverse(a0)
        nz = [(i, c) for i, c in enumerate(a) if i and not _is_exact_zero(c, ring)]
        b = [b0]
        for n in range(1, len(a)):
            acc = None
            for i, ai in nz:
                if i > n:
                    break
                bj = b[n - i]
                if _is_exact_zero(bj, ring):
                    continue
                p = ai * bj
                acc = p if acc is None else _add(acc, p, ring)
            b.append(ring.zero if acc is None else -(acc * b0))
        return LaurentSeries(self.vars, -self.floor, b, ring)

    def __truediv__(self, other):
        if isinstance(other, LaurentSeries):
            return self * other.inverse()
        return self * self.ring.inverse(self.ring.coerce(other))

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, e: int):
        if not isinstance(e, int):
            return NotImplemented
        if e < 0:
            return self.inverse() ** (-e)
        if e == 0:
            return LaurentSeries.one(self.vars[:1], len(self.coeffs), self.ring)
        result = None
        base = self
        while e:
            if e & 1:
                result = base if result is None else result * base
            e >>= 1
            if e:
                base = base * base
        return result

    def derivative(self) -> "LaurentSeries":
        coeffs = [c * (self.floor + i) for i, c in enumerate(self.coeffs)]
        return LaurentSeries(self.vars, self.floor - 1, coeffs, self.ring)

    def residue(self):
        """Coefficient of ``var**-1``."""
        if self.floor > -1:
            return self.ring.zero
        if self.trunc <= -1:
            raise TruncationError(f"window [{self.floor}, {self.trunc}) does not cover {self.var}^-1")
        return self.coeffs[-1 - self.floor]

    def __eq__(self, other):
        """Equality on the common window (missing coefficients count as zero below ``floor``)."""
        if not isinstance(other, LaurentSeries):
            if self.floor > 0:
                return False
            diff = self - other
        else:
            if self.vars != other.vars:
                return False
            diff = self - other
        return diff.is_zero()

    __hash__ = None

    def __repr__(self):
        return f"LaurentSeries({self.vars}, floor={self.floor}, trunc={self.trunc}, ring={self.ring})"

    def __str__(self):
        parts = []
        for i, c in enumerate(self.coeffs):
            if _is_exact_zero(c, self.ring):
                continue
            n = self.floor + i
            mono = "" if n == 0 else f"{self.var}^{n}"
            cs = f"({c})"
            parts.append(cs + (f"*{mono}" if mono else ""))
        parts.append(f"O({self.var}^{self.trunc})")
        return " + ".join(parts)


NestedLaurentSeries = LaurentSeries


def _add(x, y, ring):
    if _is_exact_zero(x, ring):
        return y
    if _is_exact_zero(y, ring):
        return x
    return x + y


def _mul_series(a: LaurentSeries, b: LaurentSeries, ring) -> LaurentSeries:
    vars = _merge_vars(a.vars, b.vars)
    floor = a.floor + b.floor
    trunc = min(a.floor + b.trunc, b.floor + a.trunc)
    a_nz = [(a.floor + i, c) for i, c in enumerate(a.coeffs) if not _is_exact_zero(c, ring)]
    b_idx = {b.floor + j: c for j, c in enumerate(b.coeffs) if not _is_exact_zero(c, ring)}
    coeffs = []
    for n in range(floor, trunc):
        acc = None
        for i, ai in a_nz:
            j = n - i
            if j < b.floor:
                break
            bj = b_idx.get(j)
            if bj is None:
                continue
            p = ai * bj
            acc = p if acc is None else acc + p
        coeffs.append(ring.zero if acc is None else acc)
    return LaurentSeries(vars, floor, coeffs, ring)


# ---------------------------------------------------------------- operations


def series_mul(a: LaurentSeries, b: LaurentSeries) -> LaurentSeries:
    return a * b


def series_invert(a: LaurentSeries) -> LaurentSeries:
    return a.inverse()


def series_int_pow(a: LaurentSeries, e: int) -> LaurentSeries:
    return a ** e


def residue(a: LaurentSeries):
    return a.residue()


def iterated_residue(a: LaurentSeries):
    """Res_{vars[-1]} ... Res_{vars[0]} a, innermost (first) variable first."""
    r = a
    for var in a.vars:
        if isinstance(r, LaurentSeries) and r.var == var:
            r = r.residue()
        elif isinstance(r, LaurentSeries) and var in r.vars:
            raise ValueError(f"coefficient series {r.vars} is out of order at {var}")
        else:
            # constant in the remaining variables
            return a.ring.zero
    return r


def residue_of_product(a: LaurentSeries, b: LaurentSeries):
    """Coefficient of ``var**-1`` in ``a * b`` without forming the product."""
    if a.var != b.var:
        raise ValueError("residue_of_product needs series in the same variable")
    ring = _join(a.ring, b.ring)
    if a.floor + b.floor > -1:
        return ring.zero
    if min(a.floor + b.trunc, b.floor + a.trunc) <= -1:
        raise TruncationError(f"product window does not cover {a.var}^-1")
    acc = None
    for i in range(a.floor, -1 - b.floor + 1):
        ai = a.coeffs[i - a.floor]
        bj = b.coeffs[-1 - i - b.floor]
        if _is_exact_zero(ai, ring) or _is_exact_zero(bj, ring):
            continue
        p = ai * bj
        acc = p if acc is None else acc + p
    return ring.zero if acc is None else acc


# ---------------------------------------------------------------- generators


def _taylor(var, trunc, coeff_fn, ring):
    if trunc < 1:
        raise ValueError("truncation must be at least 1")
    return LaurentSeries(var, 0, [ring.coerce(coeff_fn(n)) for n in range(trunc)], ring)


def _sin_c(n):
    return mpq(0) if n % 2 == 0 else mpq((-1) ** ((n - 1) // 2), factorial(n))


def _cos_c(n):
    return mpq(0) if n % 2 else mpq((-1) ** (n // 2), factorial(n))


def gen_named_series(name: str, var: str, trunc: int, ring=QQ) -> LaurentSeries:
    """Expansion at 0 with exact rational coefficients, known below ``var**trunc``.

    ``csc_squared_scaled`` is ``1/(2 sin x)**2``; ``cot`` is ``cot x``.
    """
    if trunc < 1:
        raise ValueError("truncation must be at least 1")
    if name == "sin":
        return _taylor(var, trunc, _sin_c, ring)
    if name == "cos":
        return _taylor(var, trunc, _cos_c, ring)
    if name == "sinh":
        return _taylor(var, trunc, lambda n: mpq(n % 2, factorial(n)), ring)
    if name == "cosh":
        return _taylor(var, trunc, lambda n: mpq((n + 1) % 2, factorial(n)), ring)
    if name == "exp":
        return _taylor(var, trunc, lambda n: mpq(1, factorial(n)), ring)
    if name == "csc_squared_scaled":
        s = _taylor(var, trunc + 3, _sin_c, ring) * 2
        return (s ** -2).truncate(trunc)
    if name == "cot":
        return gen_scaled_cot(var, trunc, 1, ring, scaled=False)
    raise ValueError(f"unknown series name {name!r}")


def _cot_coefficient(n: int) -> mpq:
    """Coefficient of x^(2n-1) in x cot x / x, i.e. (-4)^n B_2n / (2n)!."""
    return (-4) ** n * bernoulli_number(2 * n) / factorial(2 * n)


def gen_cot_formal_level(var: str, trunc: int, level: str = "k") -> LaurentSeries:
    """``k cot(k x)`` with coefficients in QQ[k]: 1/x + sum (-4)^n B_2n k^2n x^(2n-1) / (2n)!."""
    if trunc < 0:
        raise ValueError("truncation must be non-negative")
    ring = PolynomialRing(level)
    coeffs = []
    for e in range(-1, trunc):
        if e == -1:
            coeffs.append(ring.one)
        elif e % 2 == 1:
            n = (e + 1) // 2
            coeffs.append(RationalPolynomial.monomial(2 * n, _cot_coefficient(n), level))
        else:
            coeffs.append(ring.zero)
    return LaurentSeries(var, -1, coeffs, ring)


def gen_scaled_cot(var: str, trunc: int, k, ring=QQ, scaled: bool = True) -> LaurentSeries:
    """``k cot(k x)`` (or ``cot(k x)`` when ``scaled`` is false) for a numeric level ``k``."""
    k = mpq(k)
    coeffs = []
    for e in range(-1, max(trunc, 0)):
        if e == -1:
            c = mpq(1)
        elif e % 2 == 1:
            n = (e + 1) // 2
            c = _cot_coefficient(n) * k ** (2 * n)
        else:
            c = mpq(0)
        if not scaled:
            c = c / k
        coeffs.append(ring.coerce(c))
    return LaurentSeries(var, -1, coeffs, ring)


def gen_shifted_sin(var: str, trunc: int, shift=0, ring=QQ) -> LaurentSeries:
    """``sin(pi*shift + x)``; ``shift`` is rational.  Over QQ the shift must be an integer
    or half-integer so the coefficients stay rational."""
    shift = mpq(shift)
    if isinstance(ring, ComplexField):
        ctx = ring.ctx
        q = ctx.mpf(int(shift.numerator)) / int(shift.denominator)
        s, c = ctx.sinpi(q), ctx.cospi(q)
    else:
        twice = shift * 2
        if twice.denominator != 1:
            raise ValueError("rational coefficients need an integer or half-integer shift")
        quarter = int(twice) % 4
        s, c = [(0, 1), (1, 0), (0, -1), (-1, 0)][quarter]
        s, c = mpq(s), mpq(c)
    derivs = [s, c, -s, -c]
    coeffs = [ring.coerce(derivs[n % 4]) * ring.coerce(mpq(1, factorial(n))) for n in range(trunc)]
    return LaurentSeries(var, 0, coeffs, ring)


def _gen_binomial(n: int, l: int) -> int:
    if l < 0:
        return 0
    if n >= 0:
        return comb(n, l)
    return (-1) ** l * comb(l - n - 1, l)


def compose_linear(f: LaurentSeries, vars, truncs, ambient=None) -> LaurentSeries:
    """``f(vars[0] + ... + vars[-1])`` as a nested series in ``vars`` (first variable innermost).

    ``f`` is univariate.  The expansion is the one valid for ``|x_1| << |x_2| << ...``:
    ``(x_1 + S)**e = sum_l C(e, l) x_1**l S**(e - l)`` with generalised binomials.
    ``truncs[i]`` bounds the exponents of ``vars[i]``; the last window is further limited by
    the truncation of ``f``.  ``ambient`` is the full variable order the result lives in
    (it must start with ``vars``); it defaults to ``vars``.
    """
    vars = tuple(vars)
    ambient = tuple(ambient) if ambient is not None else vars
    if ambient[: len(vars)] != vars:
        raise ValueError("ambient order must start with the composed variables")
    if len(truncs) != len(vars):
        raise ValueError("one truncation per variable")
    ring = f.ring
    if len(vars) == 1:
        return LaurentSeries(ambient, f.floor, f.coeffs, ring).truncate(truncs[0])

    def build(level, ls):
        L = sum(ls)
        if level == len(vars) - 1:
            lo = f.floor - L
            hi = min(truncs[level], f.trunc - L)
            if hi <= lo:
                return LaurentSeries(vars[level:], truncs[level] - 1, [ring.zero], ring)
            coeffs = []
            for last in range(lo, hi):
                e = L + last
                fe = f.coeffs[e - f.floor]
                if _is_exact_zero(fe, ring):
                    coeffs.append(ring.zero)
                    continue
                mult = 1
                rest = e
                for l in ls:
                    mult *= _gen_binomial(rest, l)
                    rest -= l
                coeffs.append(fe * ring.coerce(mult) if mult != 1 else fe)
            return LaurentSeries(vars[level:], lo, coeffs, ring)
        return LaurentSeries(
            (ambient if level == 0 else vars[level:]), 0,
            [build(level + 1, ls + (l,)) for l in range(max(truncs[level], 1))], ring,
        )

    return build(0, ())


def flag_truncations(nvars: int, factors, target: int = -1) -> list[int]:
    """Per-variable truncation orders sufficient for an iterated residue of a product.

    ``factors`` lists ``(support, floor)``: the sorted variable indices a factor
    ``f(x_a + ... + x_b)`` depends on and the pole order bound of ``f`` (its floor).  In the
    flaglike expansion only the last variable of a support can carry negative exponents,
    at worst ``floor - (sum of the earlier exponents)``.  The product must be known up to
    exponent ``target`` in every variable, so each factor must be expanded to exponent
    ``target + (total pole order of all factors in that variable)``.
    """
    U = []
    for i in range(nvars):
        cap = 0
        for support, fl in factors:
            if support and support[-1] == i:
                lower = fl - sum(U[j] for j in support[:-1])
                cap += max(0, -lower)
        U.append(target + cap)
    return [u + 1 for u in U]


def series_from_terms(vars, terms, truncs, ring=QQ) -> LaurentSeries:
    """Nested series from ``{exponent tuple: coefficient}``; exponents must be non-negative
    and below ``truncs`` (one window per variable)."""
    vars = tuple(vars)
    truncs = list(truncs)
    if len(truncs) != len(vars):
        raise ValueError("one truncation per variable")
    for exps in terms:
        if len(exps) != len(vars) or any(not 0 <= e < t for e, t in zip(exps, truncs)):
            raise ValueError(f"exponent {exps} outside the window {truncs}")

    def build(level, prefix):
        width = max(truncs[level], 1)
        if level == len(vars) - 1:
            coeffs = [ring.coerce(terms.get(prefix + (e,), 0)) for e in range(width)]
        else:
            coeffs = [build(level + 1, prefix + (e,)) for e in range(width)]
        return LaurentSeries(vars[level:], 0, coeffs, ring)

    return build(0, ())
