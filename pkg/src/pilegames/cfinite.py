"""Linear-recurrence (C-finite) sequence tools.

A sequence s(0), s(1), ... is C-finite of order L when
    s(m) + c_1 s(m-1) + ... + c_L s(m-L) = 0   for every m >= I,
with constant rationals c_j and some validity start I >= L.  Such a
sequence is exactly a rational generating function with denominator
Q(x) = 1 + c_1 x + ... + c_L x^L, and the two views convert both ways.

`guess_recurrence` fits the minimal such recurrence from raw terms, or
reports that none exists within the requested order; "no fit" is a value
here, not an error, because for some of the sequences this package meets
the absence of a fit is itself the result of interest.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Optional, Sequence

from .algebra import ONE_POLY, Poly, RatFunc, RationalLike, Series


class InsufficientDataError(ValueError):
    """Too few terms to certify a recurrence of the requested order."""


def _as_terms(data: Iterable[RationalLike] | Series) -> list[Fraction]:
    if isinstance(data, Series):
        return list(data.coeffs)
    return [Fraction(v) for v in data]


@dataclass(frozen=True, slots=True)
class CFiniteRec:
    """Recurrence s(m) = -sum_j coeffs[j-1] * s(m-j), valid from len(initials).

    `initials` may be longer than `order`; the extra entries carry a
    transient head that the recurrence does not cover.  `offset` prepends
    that many zero terms before index 0 of the recurrence proper.
    """

    order: int
    coeffs: tuple[Fraction, ...]
    initials: tuple[Fraction, ...]
    offset: int = 0

    def __post_init__(self) -> None:
        if self.order < 0 or self.offset < 0:
            raise ValueError("order and offset must be >= 0")
        if len(self.coeffs) != self.order:
            raise ValueError("coefficient count must equal the order")
        if self.order > 0 and self.coeffs[-1] == 0:
            raise ValueError("trailing recurrence coefficient must be nonzero")
        if len(self.initials) < self.order:
            raise ValueError("need at least `order` initial terms")

    @staticmethod
    def of(
        coeffs: Iterable[RationalLike],
        initials: Iterable[RationalLike],
        offset: int = 0,
    ) -> "CFiniteRec":
        cs = tuple(Fraction(c) for c in coeffs)
        return CFiniteRec(len(cs), cs, tuple(Fraction(v) for v in initials), offset)

    def generate(self, count: int) -> Series:
        """First `count` terms of the sequence, including the offset zeros."""
        out: list[Fraction] = [Fraction(0)] * min(self.offset, count)
        body: list[Fraction] = []
        while len(out) + len(body) < count:
            m = len(body)
            if m < len(self.initials):
                body.append(self.initials[m])
            else:
                acc = Fraction(0)
                for j, c in enumerate(self.coeffs, start=1):
                    acc -= c * body[m - j]
                body.append(acc)
        return Series(tuple(out + body))


def _consistent_solution(
    rows: list[list[Fraction]], rhs: list[Fraction]
) -> Optional[list[Fraction]]:
    """A particular solution of a possibly over/under-determined system.

    Row echelon over Fraction; free variables are set to zero.  Returns
    None when the system is inconsistent.
    """
    if not rows:
        return []
    cols = len(rows[0])
    aug = [row[:] + [b] for row, b in zip(rows, rhs)]
    pivots: list[tuple[int, int]] = []
    r = 0
    for c in range(cols):
        pivot = next((i for i in range(r, len(aug)) if aug[i][c] != 0), None)
        if pivot is None:
            continue
        aug[r], aug[pivot] = aug[pivot], aug[r]
        inv = 1 / aug[r][c]
        for i in range(len(aug)):
            if i == r or aug[i][c] == 0:
                continue
            factor = aug[i][c] * inv
            for j in range(c, cols + 1):
                aug[i][j] -= factor * aug[r][j]
        pivots.append((r, c))
        r += 1
        if r == len(aug):
            break
    for i in range(r, len(aug)):
        if aug[i][cols] != 0:
            return None
    xs = [Fraction(0)] * cols
    for i, c in pivots:
        xs[c] = aug[i][cols] / aug[i][c]
    return xs


def guess_recurrence(
    terms: Iterable[RationalLike] | Series, max_order: int
) -> Optional[CFiniteRec]:
    """Fit the minimal C-finite recurrence of order <= max_order, or None.

    Candidate orders are tried in ascending order; order L is accepted only
    when one coefficient vector satisfies *every* supplied term from index L
    on, so each accepted fit is certified against the whole tail, not just a
    square window.  Leading zero terms become the recurrence offset.

    Requires at least 2*max_order + 5 terms after the leading zeros; with
    less data a fit could not be distinguished from coincidence.
    """
    data = _as_terms(terms)
    if max_order < 0:
        raise ValueError("max_order must be >= 0")
    offset = 0
    while offset < len(data) and data[offset] == 0:
        offset += 1
    if offset == len(data):
        return CFiniteRec(0, (), (), 0)
    trimmed = data[offset:]
    if len(trimmed) < 2 * max_order + 5:
        raise InsufficientDataError(
            f"{len(trimmed)} usable terms cannot certify order {max_order} "
            f"(need {2 * max_order + 5})"
        )
    for order in range(max_order + 1):
        rows = [
            [trimmed[m - j] for j in range(1, order + 1)]
            for m in range(order, len(trimmed))
        ]
        rhs = [-trimmed[m] for m in range(order, len(trimmed))]
        sol = _consistent_solution(rows, rhs)
        if sol is None:
            continue
        coeffs = list(sol)
        while coeffs and coeffs[-1] == 0:
            coeffs.pop()
        return CFiniteRec.of(coeffs, trimmed[:order], offset)
    return None


def rec_to_ratfunc(rec: CFiniteRec) -> RatFunc:
    """The rational generating function of the recurrence's sequence."""
    den = Poly.of([Fraction(1), *rec.coeffs])
    head = len(rec.initials)
    num_coeffs = []
    for i in range(head):
        acc = rec.initials[i]
        for j in range(1, min(i, rec.order) + 1):
            acc += rec.coeffs[j - 1] * rec.initials[i - j]
        num_coeffs.append(acc)
    num = Poly.of(num_coeffs).shift(rec.offset)
    return RatFunc(num, den)


def hadamard_guess(
    a: Iterable[RationalLike] | Series,
    b: Iterable[RationalLike] | Series,
    degree_bound: int,
) -> Optional[RatFunc]:
    """Guess the GF of the termwise product of two series, or None.

    C-finite sequences are closed under termwise products, with the order
    bounded by the product of the factor orders; callers pass that bound.
    """
    ta, tb = _as_terms(a), _as_terms(b)
    if min(len(ta), len(tb)) < 2 * degree_bound + 5:
        raise InsufficientDataError(
            f"need at least {2 * degree_bound + 5} terms of both factors"
        )
    prod = [x * y for x, y in zip(ta, tb)]
    rec = guess_recurrence(prod, degree_bound)
    return None if rec is None else rec_to_ratfunc(rec)


def partial_sum_complement(g: RatFunc) -> RatFunc:
    """Map sum_k g_k x^k to sum_k (1 - sum_{i<=k} g_i) x^k, i.e. (1-g)/(1-x).

    For a probability generating function g this is the survival-weight
    series: coefficient k is the probability the game is still running
    after k turns.
    """
    one_minus_x = RatFunc.of([1, -1])
    return (RatFunc.of([1]) - g) / one_minus_x


@dataclass(frozen=True, slots=True)
class ShiftOpPoly:
    """A polynomial in the shift operator N: (N^j f)(m) = f(m + j).

    Applying sum_j coeffs[j] N^j to a data window yields the residual
    sequence r(m) = sum_j coeffs[j] * data(m + j); an annihilator makes
    every residual zero.
    """

    coeffs: tuple[Fraction, ...]

    def __post_init__(self) -> None:
        if not self.coeffs or self.coeffs[-1] == 0:
            raise ValueError("operator needs a nonzero leading coefficient")

    @staticmethod
    def of(coeffs: Iterable[RationalLike]) -> "ShiftOpPoly":
        return ShiftOpPoly(tuple(Fraction(c) for c in coeffs))

    @staticmethod
    def from_factors(*factors: Iterable[RationalLike]) -> "ShiftOpPoly":
        """Product of factors given lowest order first, e.g. (N-1)^2 (pN-q)
        as from_factors([-1, 1], [-1, 1], [-q, p])."""
        acc = ONE_POLY
        for f in factors:
            acc = acc * Poly.of(f)
        return ShiftOpPoly(acc.coeffs)

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def apply(self, data: Iterable[RationalLike] | Series) -> Series:
        return apply_shift_annihilator(self, data)


def apply_shift_annihilator(
    op: ShiftOpPoly, data: Iterable[RationalLike] | Series
) -> Series:
    """Residuals of op applied at every index where the window fits."""
    values = _as_terms(data)
    d = op.degree
    if len(values) <= d:
        raise InsufficientDataError(
            f"operator of degree {d} needs more than {d} data points"
        )
    out = []
    for m in range(len(values) - d):
        out.append(sum((c * values[m + j] for j, c in enumerate(op.coeffs)), Fraction(0)))
    return Series(tuple(out))
