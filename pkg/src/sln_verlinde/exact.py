"""Exact scalars: rationals, Bernoulli numbers, rational polynomials and rational multiples of pi powers.

Rationals are ``gmpy2.mpq`` throughout; ``Q(x)`` converts anything rational-like.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass
from math import comb

from gmpy2 import mpq

__all__ = [
    "Q",
    "parse_rational",
    "format_rational",
    "RationalPolynomial",
    "PiPowerValue",
    "bernoulli_number",
    "bernoulli_polynomial",
    "poly_integrate_unit_interval",
    "zeta_even",
]


def Q(x, den=None) -> mpq:
    if den is None:
        if isinstance(x, str):
            return parse_rational(x)
        return mpq(x)
    return mpq(x, den)


def parse_rational(text: str) -> mpq:
    text = text.strip()
    if "/" in text:
        num, den = text.split("/")
        return mpq(int(num), int(den))
    return mpq(int(text))


def format_rational(x) -> str:
    x = mpq(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


class RationalPolynomial:
    """Polynomial in one formal variable with rational coefficients.

    ``coeffs[i]`` is the coefficient of ``var**i``; trailing zeros are stripped so
    the zero polynomial has no coefficients and degree -1.
    """

    __slots__ = ("var", "coeffs")

    def __init__(self, coeffs=(), var: str = "k"):
        cs = [mpq(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        self.coeffs = tuple(cs)
        self.var = var

    @classmethod
    def constant(cls, c, var: str = "k") -> "RationalPolynomial":
        return cls([c], var)

    @classmethod
    def monomial(cls, power: int, c=1, var: str = "k") -> "RationalPolynomial":
        return cls([0] * power + [c], var)

    @classmethod
    def gen(cls, var: str = "k") -> "RationalPolynomial":
        return cls([0, 1], var)

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def leading_coefficient(self) -> mpq:
        return self.coeffs[-1] if self.coeffs else mpq(0)

    def coefficient(self, i: int) -> mpq:
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else mpq(0)

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_constant(self) -> bool:
        return len(self.coeffs) <= 1

    def __call__(self, x):
        acc = mpq(0) if isinstance(x, (int, type(mpq(0)))) else 0 * x
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def _coerce(self, other):
        if isinstance(other, RationalPolynomial):
            if other.var != self.var and other.degree > 0 and self.degree > 0:
                raise ValueError(f"variable mismatch: {self.var} vs {other.var}")
            return other
        try:
            return RationalPolynomial([mpq(other)], self.var)
        except TypeError:
            return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        n = max(len(self.coeffs), len(o.coeffs))
        return RationalPolynomial(
            [self.coefficient(i) + o.coefficient(i) for i in range(n)], self.var
        )

    __radd__ = __add__

    def __neg__(self):
        return RationalPolynomial([-c for c in self.coeffs], self.var)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other):
        if not isinstance(other, RationalPolynomial):
            try:
                c = mpq(other)
            except TypeError:
                return NotImplemented
            return RationalPolynomial([c * a for a in self.coeffs], self.var)
        if not self.coeffs or not other.coeffs:
            return RationalPolynomial((), self.var)
        out = [mpq(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            for j, b in enumerate(other.coeffs):
                if b:
                    out[i + j] += a * b
        return RationalPolynomial(out, self.var)

    __rmul__ = __mul__

    def __truediv__(self, other):
        c = mpq(other)
        return RationalPolynomial([a / c for a in self.coeffs], self.var)

    def __pow__(self, e: int):
        if e < 0:
            raise ValueError("negative power of a polynomial")
        result = RationalPolynomial([1], self.var)
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def __eq__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self.coeffs == o.coeffs

    def __hash__(self):
        if len(self.coeffs) <= 1:
            return hash(self.coefficient(0))
        return hash((self.var, self.coeffs))

    def __bool__(self):
        return bool(self.coeffs)

    def shift(self, h) -> "RationalPolynomial":
        """p(var + h)."""
        out = RationalPolynomial((), self.var)
        lin = RationalPolynomial([h, 1], self.var)
        for c in reversed(self.coeffs):
            out = out * lin + c
        return out

    def derivative(self) -> "RationalPolynomial":
        return RationalPolynomial([i * c for i, c in enumerate(self.coeffs)][1:], self.var)

    def antiderivative(self) -> "RationalPolynomial":
        return RationalPolynomial([0] + [c / (i + 1) for i, c in enumerate(self.coeffs)], self.var)

    def __repr__(self):
        return f"RationalPolynomial({[format_rational(c) for c in self.coeffs]!r}, var={self.var!r})"

    def __str__(self):
        if not self.coeffs:
            return "0"
        terms = []
        for i in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[i]
            if c == 0:
                continue
            mono = "" if i == 0 else (self.var if i == 1 else f"{self.var}^{i}")
            if mono and abs(c) == 1:
                s = ("-" if c < 0 else "") + mono
            else:
                s = format_rational(c) + (f"*{mono}" if mono else "")
            terms.append(s)
        return " + ".join(terms).replace("+ -", "- ")


@dataclass(frozen=True)
class PiPowerValue:
    """``coefficient * pi**pi_power`` with an exact rational coefficient."""

    coefficient: mpq
    pi_power: int

    def __post_init__(self):
        object.__setattr__(self, "coefficient", mpq(self.coefficient))
        if self.pi_power < 0:
            raise ValueError("pi_power must be non-negative")

    def __eq__(self, other):
        if not isinstance(other, PiPowerValue):
            return NotImplemented
        if self.coefficient == 0 and other.coefficient == 0:
            return True
        return self.coefficient == other.coefficient and self.pi_power == other.pi_power

    def __hash__(self):
        if self.coefficient == 0:
            return hash(0)
        return hash((self.coefficient, self.pi_power))

    def __add__(self, other):
        if not isinstance(other, PiPowerValue):
            return NotImplemented
        if other.coefficient == 0:
            return self
        if self.coefficient == 0:
            return other
        if self.pi_power != other.pi_power:
            raise ValueError("cannot add values with different powers of pi")
        return PiPowerValue(self.coefficient + other.coefficient, self.pi_power)

    def __mul__(self, other):
        if isinstance(other, PiPowerValue):
            return PiPowerValue(self.coefficient * other.coefficient, self.pi_power + other.pi_power)
        return PiPowerValue(self.coefficient * mpq(other), self.pi_power)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, PiPowerValue):
            if other.pi_power > self.pi_power:
                raise ValueError("division would produce a negative power of pi")
            return PiPowerValue(self.coefficient / other.coefficient, self.pi_power - other.pi_power)
        return PiPowerValue(self.coefficient / mpq(other), self.pi_power)

    def to_mpf(self, ctx):
        c = self.coefficient
        return ctx.mpf(int(c.numerator)) / int(c.denominator) * ctx.pi ** self.pi_power

    def __float__(self):
        import math

        return float(self.coefficient) * math.pi ** self.pi_power

    def to_json(self) -> dict:
        return {"coefficient": format_rational(self.coefficient), "pi_power": self.pi_power}

    def __str__(self):
        return f"({format_rational(self.coefficient)})*pi^{self.pi_power}"


_bernoulli_memo = [mpq(1)]
_bernoulli_lock = threading.Lock()


def bernoulli_number(n: int) -> mpq:
    """B_n with B_1 = -1/2, from sum_{j<=n} C(n+1, j) B_j = 0."""
    if n < 0:
        raise ValueError("n must be non-negative")
    if n < len(_bernoulli_memo):
        return _bernoulli_memo[n]
    with _bernoulli_lock:
        memo = _bernoulli_memo
        for m in range(len(memo), n + 1):
            if m >= 3 and m % 2 == 1:
                memo.append(mpq(0))
                continue
            s = sum(comb(m + 1, j) * memo[j] for j in range(m))
            memo.append(-s / (m + 1))
    return _bernoulli_memo[n]


def bernoulli_polynomial(n: int, var: str = "x") -> RationalPolynomial:
    # coefficient of x^i is C(n, n-i) B_{n-i}
    return RationalPolynomial([comb(n, i) * bernoulli_number(n - i) for i in range(n + 1)], var)


def poly_integrate_unit_interval(p: RationalPolynomial) -> mpq:
    return sum((c / (i + 1) for i, c in enumerate(p.coeffs)), mpq(0))


def zeta_even(n: int) -> PiPowerValue:
    """zeta(2n) = (-1)^(n+1) B_2n (2 pi)^2n / (2 (2n)!)."""
    if n < 1:
        raise ValueError("n must be positive")
    from math import factorial

    c = (-1) ** (n + 1) * bernoulli_number(2 * n) * mpq(2) ** (2 * n) / (2 * factorial(2 * n))
    return PiPowerValue(c, 2 * n)
