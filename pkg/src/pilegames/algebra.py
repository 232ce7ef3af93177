"""Exact scalar, polynomial, and rational-function arithmetic.

Everything in this module is exact: scalars are `fractions.Fraction`,
polynomials are dense ascending coefficient tuples over the rationals, and
rational functions are kept reduced (coprime numerator and denominator) with
the denominator scaled so that its lowest-order nonzero coefficient is 1.
That canonical form makes structural equality coincide with mathematical
equality and lets power-series coefficients be read off the denominator's
linear recurrence directly.

All values are immutable; every operation is a pure function of its inputs.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence, Union

Rational = Fraction

RationalLike = Union[Fraction, int]

_RATIONAL_TEXT = re.compile(r"^[+-]?\d+(/[1-9]\d*)?$")


class PoleError(ArithmeticError):
    """Evaluation or expansion hit a pole (denominator vanished)."""


def parse_rational(text: str) -> Fraction:
    """Parse "a" or "a/b" with integer a, positive integer b.

    Decimal notation is rejected on purpose: every quantity in this package
    is exact and accepting floats would silently break that.
    """
    text = text.strip()
    if not _RATIONAL_TEXT.match(text):
        raise ValueError(f"not an exact rational: {text!r} (expected 'a' or 'a/b')")
    return Fraction(text)


def format_rational(value: RationalLike) -> str:
    return str(Fraction(value))


def _strip(coeffs: list[Fraction]) -> tuple[Fraction, ...]:
    while coeffs and coeffs[-1] == 0:
        coeffs.pop()
    return tuple(coeffs)


@dataclass(frozen=True, slots=True)
class Poly:
    """Dense univariate polynomial over the rationals, ascending coefficients.

    The zero polynomial is the empty tuple; otherwise the leading (last)
    coefficient is nonzero.  Use `Poly.of(...)` to build from any iterable of
    ints/Fractions; the constructor itself expects an already-normal tuple.
    """

    coeffs: tuple[Fraction, ...]

    @staticmethod
    def of(coeffs: Iterable[RationalLike]) -> "Poly":
        return Poly(_strip([Fraction(c) for c in coeffs]))

    @staticmethod
    def const(value: RationalLike) -> "Poly":
        return Poly.of([value])

    @property
    def degree(self) -> int:
        """Degree, with the convention deg 0 = -1."""
        return len(self.coeffs) - 1

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    def coeff(self, k: int) -> Fraction:
        return self.coeffs[k] if 0 <= k < len(self.coeffs) else Fraction(0)

    def __add__(self, other: "Poly") -> "Poly":
        n = max(len(self.coeffs), len(other.coeffs))
        return Poly(_strip([self.coeff(k) + other.coeff(k) for k in range(n)]))

    def __sub__(self, other: "Poly") -> "Poly":
        n = max(len(self.coeffs), len(other.coeffs))
        return Poly(_strip([self.coeff(k) - other.coeff(k) for k in range(n)]))

    def __neg__(self) -> "Poly":
        return Poly(tuple(-c for c in self.coeffs))

    def __mul__(self, other: "Poly") -> "Poly":
        if self.is_zero or other.is_zero:
            return ZERO_POLY
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return Poly(_strip(out))

    def scale(self, factor: RationalLike) -> "Poly":
        factor = Fraction(factor)
        if factor == 0:
            return ZERO_POLY
        return Poly(tuple(c * factor for c in self.coeffs))

    def shift(self, k: int) -> "Poly":
        """Multiply by x**k."""
        if self.is_zero:
            return self
        return Poly((Fraction(0),) * k + self.coeffs)

    def stretch(self, k: int) -> "Poly":
        """Substitute x**k for x."""
        if k < 1:
            raise ValueError("stretch factor must be >= 1")
        if self.is_zero or k == 1:
            return self
        out = [Fraction(0)] * (k * self.degree + 1)
        for i, c in enumerate(self.coeffs):
            out[k * i] = c
        return Poly(tuple(out))

    def __call__(self, x0: RationalLike) -> Fraction:
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * x0 + c
        return acc

    def derivative(self) -> "Poly":
        return Poly(_strip([k * c for k, c in enumerate(self.coeffs)][1:]))

    def divmod(self, other: "Poly") -> tuple["Poly", "Poly"]:
        if other.is_zero:
            raise ZeroDivisionError("polynomial division by zero")
        if self.degree < other.degree:
            return ZERO_POLY, self
        rem = list(self.coeffs)
        lead = other.coeffs[-1]
        quo = [Fraction(0)] * (self.degree - other.degree + 1)
        for k in range(len(quo) - 1, -1, -1):
            top = rem[k + other.degree]
            if top == 0:
                continue
            c = top / lead
            quo[k] = c
            for j, b in enumerate(other.coeffs):
                rem[k + j] -= c * b
        return Poly(_strip(quo)), Poly(_strip(rem))

    def exact_div(self, other: "Poly") -> "Poly":
        quo, rem = self.divmod(other)
        if not rem.is_zero:
            raise ValueError("polynomial division left a remainder")
        return quo

    def monic(self) -> "Poly":
        if self.is_zero:
            return self
        return self.scale(1 / self.coeffs[-1])

    def lowest_term(self) -> tuple[int, Fraction]:
        """(valuation, coefficient) of the lowest-order nonzero term."""
        for k, c in enumerate(self.coeffs):
            if c != 0:
                return k, c
        raise ValueError("zero polynomial has no lowest term")

    def __str__(self) -> str:
        if self.is_zero:
            return "0"
        parts: list[str] = []
        for k, c in enumerate(self.coeffs):
            if c == 0:
                continue
            mag = abs(c)
            if k == 0:
                body = str(mag)
            else:
                xk = "x" if k == 1 else f"x^{k}"
                body = xk if mag == 1 else f"{mag}*{xk}"
            if not parts:
                parts.append(body if c > 0 else f"-{body}")
            else:
                parts.append(f"+ {body}" if c > 0 else f"- {body}")
        return " ".join(parts)


ZERO_POLY = Poly(())
ONE_POLY = Poly((Fraction(1),))
X_POLY = Poly((Fraction(0), Fraction(1)))


def _integer_primitive(p: Poly) -> list[int]:
    """Scale a nonzero rational polynomial to a primitive integer one."""
    den = math.lcm(*(c.denominator for c in p.coeffs))
    ints = [int(c * den) for c in p.coeffs]
    content = math.gcd(*ints)
    return [c // content for c in ints]


def _int_strip(coeffs: list[int]) -> list[int]:
    while coeffs and coeffs[-1] == 0:
        coeffs.pop()
    return coeffs


def _pseudo_rem(a: list[int], b: list[int]) -> list[int]:
    """Pseudo-remainder of integer polynomials a mod b (deg b >= 0)."""
    r = a[:]
    db = len(b) - 1
    lb = b[-1]
    while len(r) - 1 >= db:
        k = len(r) - 1 - db
        lr = r[-1]
        r = [lb * c for c in r]
        for j, bc in enumerate(b):
            r[k + j] -= lr * bc
        r = _int_strip(r)
        if not r:
            break
    return r


def _primitive(coeffs: list[int]) -> list[int]:
    if not coeffs:
        return coeffs
    content = math.gcd(*coeffs)
    return [c // content for c in coeffs]


def poly_gcd(a: Poly, b: Poly) -> Poly:
    """Monic gcd via a primitive pseudo-remainder sequence over the integers.

    Clearing denominators first keeps the intermediate coefficients from the
    blowup that a naive Euclid over Fraction produces.
    """
    if a.is_zero and b.is_zero:
        raise ValueError("gcd(0, 0) is undefined")
    if a.is_zero:
        return b.monic()
    if b.is_zero:
        return a.monic()
    fa, fb = _integer_primitive(a), _integer_primitive(b)
    if len(fa) < len(fb):
        fa, fb = fb, fa
    while fb:
        fa, fb = fb, _primitive(_pseudo_rem(fa, fb))
    return Poly.of(fa).monic()


def poly_lcm(a: Poly, b: Poly) -> Poly:
    if a.is_zero or b.is_zero:
        return ZERO_POLY
    return (a * b).exact_div(poly_gcd(a, b))


@dataclass(frozen=True, slots=True)
class RatFunc:
    """Reduced rational function num/den over the rationals.

    Canonical form: gcd(num, den) = 1 and the lowest-order nonzero
    coefficient of den is 1.  Dataclass equality is therefore equality of
    rational functions, and `series()` works whenever den(0) != 0.
    """

    num: Poly
    den: Poly

    def __post_init__(self) -> None:
        num, den = self.num, self.den
        if den.is_zero:
            raise ZeroDivisionError("zero denominator")
        if num.is_zero:
            num, den = ZERO_POLY, ONE_POLY
        else:
            g = poly_gcd(num, den)
            if g.degree > 0:
                num, den = num.exact_div(g), den.exact_div(g)
            _, low = den.lowest_term()
            if low != 1:
                num, den = num.scale(1 / low), den.scale(1 / low)
        object.__setattr__(self, "num", num)
        object.__setattr__(self, "den", den)

    @staticmethod
    def of(num: Iterable[RationalLike], den: Iterable[RationalLike] = (1,)) -> "RatFunc":
        return RatFunc(Poly.of(num), Poly.of(den))

    @staticmethod
    def const(value: RationalLike) -> "RatFunc":
        return RatFunc(Poly.const(value), ONE_POLY)

    @staticmethod
    def from_poly(p: Poly) -> "RatFunc":
        return RatFunc(p, ONE_POLY)

    @property
    def is_zero(self) -> bool:
        return self.num.is_zero

    def __add__(self, other: "RatFunc") -> "RatFunc":
        return RatFunc(self.num * other.den + other.num * self.den, self.den * other.den)

    def __sub__(self, other: "RatFunc") -> "RatFunc":
        return RatFunc(self.num * other.den - other.num * self.den, self.den * other.den)

    def __neg__(self) -> "RatFunc":
        return RatFunc(-self.num, self.den)

    def __mul__(self, other: "RatFunc") -> "RatFunc":
        return RatFunc(self.num * other.num, self.den * other.den)

    def __truediv__(self, other: "RatFunc") -> "RatFunc":
        if other.is_zero:
            raise ZeroDivisionError("division by the zero rational function")
        return RatFunc(self.num * other.den, self.den * other.num)

    def scale(self, factor: RationalLike) -> "RatFunc":
        return RatFunc(self.num.scale(factor), self.den)

    def derivative(self) -> "RatFunc":
        return RatFunc(
            self.num.derivative() * self.den - self.num * self.den.derivative(),
            self.den * self.den,
        )

    def stretch(self, k: int) -> "RatFunc":
        return RatFunc(self.num.stretch(k), self.den.stretch(k))

    def __call__(self, x0: RationalLike) -> Fraction:
        d = self.den(x0)
        if d == 0:
            raise PoleError(f"pole at x = {Fraction(x0)}")
        return self.num(x0) / d

    def series(self, order: int) -> "Series":
        return series_expand(self, order)

    def __str__(self) -> str:
        if self.den == ONE_POLY:
            return str(self.num)
        return f"({self.num})/({self.den})"


ZERO = RatFunc(ZERO_POLY, ONE_POLY)
ONE = RatFunc(ONE_POLY, ONE_POLY)
X = RatFunc(X_POLY, ONE_POLY)


def xdx(f: RatFunc) -> RatFunc:
    """The operator x*d/dx, the factorial-moment building block."""
    return X * f.derivative()


@dataclass(frozen=True, slots=True)
class Series:
    """Truncated power series: coefficients 0..order, all exact."""

    coeffs: tuple[Fraction, ...]

    @staticmethod
    def of(coeffs: Iterable[RationalLike]) -> "Series":
        return Series(tuple(Fraction(c) for c in coeffs))

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    def coeff(self, k: int) -> Fraction:
        return self.coeffs[k]

    def partial_sums(self) -> "Series":
        acc = Fraction(0)
        out = []
        for c in self.coeffs:
            acc += c
            out.append(acc)
        return Series(tuple(out))

    def hadamard(self, other: "Series") -> "Series":
        n = min(len(self.coeffs), len(other.coeffs))
        return Series(tuple(self.coeffs[k] * other.coeffs[k] for k in range(n)))

    def __str__(self) -> str:
        return "[" + ", ".join(str(c) for c in self.coeffs) + "]"


def series_expand(f: RatFunc, order: int) -> Series:
    """Coefficients 0..order of f as a power series at 0.

    Runs the denominator's linear recurrence, so the cost is
    O(order * deg den) exact operations.  Requires den(0) != 0, which the
    canonical form guarantees unless x divides the denominator.
    """
    if order < 0:
        raise ValueError("order must be >= 0")
    q = f.den.coeffs
    if not q or q[0] == 0:
        raise PoleError("pole at x = 0, no power series there")
    q0 = q[0]
    out: list[Fraction] = []
    for k in range(order + 1):
        acc = f.num.coeff(k)
        for j in range(1, min(k, f.den.degree) + 1):
            acc -= q[j] * out[k - j]
        out.append(acc / q0)
    return Series(tuple(out))
