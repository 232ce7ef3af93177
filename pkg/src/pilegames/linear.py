"""Exact linear solving over the rationals and over rational functions.

Two paths share one entry point, `linear_solve`:

* all-scalar systems run plain Gaussian elimination over Fraction;
* systems with polynomial or rational-function entries are cleared to
  polynomial rows and run through fraction-free (Bareiss) elimination,
  which keeps every intermediate entry a polynomial and so avoids the
  gcd storms that naive elimination over rational functions causes.

Matrices are plain sequences of rows; `linear_solve` validates shape.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence, Union

from .algebra import ONE_POLY, Poly, RatFunc, ZERO_POLY, poly_lcm

Entry = Union[Fraction, int, Poly, RatFunc]


class SingularMatrixError(ArithmeticError):
    """The coefficient matrix is singular (no unique solution)."""


def _check_shape(rows: Sequence[Sequence[Entry]], rhs: Sequence[Entry]) -> int:
    n = len(rows)
    if n == 0:
        raise ValueError("empty system")
    if any(len(row) != n for row in rows):
        raise ValueError("matrix must be square")
    if len(rhs) != n:
        raise ValueError("right-hand side length must match matrix size")
    return n


def solve_rational(rows: Sequence[Sequence[Fraction]], rhs: Sequence[Fraction]) -> list[Fraction]:
    """Solve A x = b over Fraction by Gaussian elimination."""
    n = _check_shape(rows, rhs)
    aug = [[Fraction(v) for v in row] + [Fraction(b)] for row, b in zip(rows, rhs)]
    for col in range(n):
        pivot = next((r for r in range(col, n) if aug[r][col] != 0), None)
        if pivot is None:
            raise SingularMatrixError(f"no pivot in column {col}")
        aug[col], aug[pivot] = aug[pivot], aug[col]
        inv = 1 / aug[col][col]
        for r in range(col + 1, n):
            factor = aug[r][col] * inv
            if factor == 0:
                continue
            for c in range(col, n + 1):
                aug[r][c] -= factor * aug[col][c]
    xs: list[Fraction] = [Fraction(0)] * n
    for r in range(n - 1, -1, -1):
        acc = aug[r][n]
        for c in range(r + 1, n):
            acc -= aug[r][c] * xs[c]
        xs[r] = acc / aug[r][r]
    return xs


def _as_poly_row(row: Sequence[Entry], b: Entry) -> list[Poly]:
    funcs = [v if isinstance(v, RatFunc) else RatFunc.from_poly(_as_poly(v)) for v in list(row) + [b]]
    common = ONE_POLY
    for f in funcs:
        common = poly_lcm(common, f.den)
    return [f.num * common.exact_div(f.den) for f in funcs]


def _as_poly(v: Entry) -> Poly:
    if isinstance(v, Poly):
        return v
    if isinstance(v, RatFunc):
        raise TypeError("rational function where polynomial expected")
    return Poly.const(v)


def solve_ratfunc(rows: Sequence[Sequence[Entry]], rhs: Sequence[Entry]) -> list[RatFunc]:
    """Solve A x = b with polynomial/rational-function entries, exactly.

    Fraction-free elimination: after clearing each row to polynomials, the
    Bareiss update (pivot*a - b*c) / previous_pivot stays polynomial at every
    step.  Pivots are chosen of minimal degree to keep products small.
    """
    n = _check_shape(rows, rhs)
    aug = [_as_poly_row(row, b) for row, b in zip(rows, rhs)]
    prev = ONE_POLY
    for col in range(n):
        pivot = None
        for r in range(col, n):
            if not aug[r][col].is_zero and (pivot is None or aug[r][col].degree < aug[pivot][col].degree):
                pivot = r
        if pivot is None:
            raise SingularMatrixError(f"no pivot in column {col}")
        aug[col], aug[pivot] = aug[pivot], aug[col]
        lead = aug[col][col]
        for r in range(col + 1, n):
            head = aug[r][col]
            for c in range(col, n + 1):
                aug[r][c] = (lead * aug[r][c] - head * aug[col][c]).exact_div(prev)
        prev = lead
    xs: list[RatFunc] = [RatFunc(ZERO_POLY, ONE_POLY)] * n
    for r in range(n - 1, -1, -1):
        acc = RatFunc(aug[r][n], ONE_POLY)
        for c in range(r + 1, n):
            acc = acc - RatFunc(aug[r][c], ONE_POLY) * xs[c]
        xs[r] = acc / RatFunc(aug[r][r], ONE_POLY)
    return xs


def linear_solve(rows: Sequence[Sequence[Entry]], rhs: Sequence[Entry]) -> list:
    """Dispatch on entry types: scalar systems over Fraction, else Bareiss."""
    scalar = all(
        isinstance(v, (int, Fraction)) for row in rows for v in row
    ) and all(isinstance(v, (int, Fraction)) for v in rhs)
    if scalar:
        return solve_rational(rows, rhs)
    return solve_ratfunc(rows, rhs)
