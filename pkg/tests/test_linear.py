from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from pilegames.algebra import Poly, RatFunc
from pilegames.linear import (
    SingularMatrixError,
    linear_solve,
    solve_rational,
    solve_ratfunc,
)

entries = st.builds(Fraction, st.integers(-6, 6), st.integers(1, 4))


def test_solve_rational_known_system():
    a = [[Fraction(2), Fraction(1)], [Fraction(1), Fraction(-1)]]
    b = [Fraction(5), Fraction(1)]
    assert solve_rational(a, b) == [Fraction(2), Fraction(1)]


def test_solve_rational_singular():
    a = [[Fraction(1), Fraction(2)], [Fraction(2), Fraction(4)]]
    with pytest.raises(SingularMatrixError):
        solve_rational(a, [Fraction(1), Fraction(1)])


def test_solve_rational_shape_errors():
    with pytest.raises(ValueError):
        solve_rational([[Fraction(1)]], [Fraction(1), Fraction(2)])
    with pytest.raises(ValueError):
        solve_rational([[Fraction(1), Fraction(2)]], [Fraction(1)])


def test_solve_ratfunc_matches_cramer():
    x = Poly.of([0, 1])
    one = Poly.of([1])
    a = [[one, x], [x, one]]
    b = [one, Poly.of([0, 0, 1])]
    got = solve_ratfunc(a, b)
    det = RatFunc.from_poly(one - x * x)
    assert got[0] == RatFunc.from_poly(one - x * Poly.of([0, 0, 1])) / det
    assert got[1] == RatFunc.from_poly(Poly.of([0, 0, 1]) - x) / det
    # residual check: A @ got == b
    for i in range(2):
        acc = sum(
            (RatFunc.from_poly(a[i][j]) * got[j] for j in range(2)),
            RatFunc.of([0]),
        )
        assert acc == RatFunc.from_poly(b[i])


def test_solve_ratfunc_needs_pivot_swap():
    zero, one, x = Poly.of([0]), Poly.of([1]), Poly.of([0, 1])
    a = [[zero, one], [x, zero]]
    b = [one, one]
    got = solve_ratfunc(a, b)
    assert got[0] == RatFunc.of([1], [0, 1])
    assert got[1] == RatFunc.of([1], [1])


def test_solve_ratfunc_singular():
    x = Poly.of([0, 1])
    with pytest.raises(SingularMatrixError):
        solve_ratfunc([[x, x], [x, x]], [Poly.of([1]), Poly.of([2])])


def test_linear_solve_dispatch():
    a = [[Fraction(3)]]
    assert linear_solve(a, [Fraction(6)]) == [Fraction(2)]
    got = linear_solve([[Poly.of([0, 1])]], [Poly.of([1])])
    assert got == [RatFunc.of([1], [0, 1])]


@given(
    st.integers(1, 4).flatmap(
        lambda k: st.tuples(
            st.lists(st.lists(entries, min_size=k, max_size=k), min_size=k, max_size=k),
            st.lists(entries, min_size=k, max_size=k),
        )
    )
)
def test_solve_rational_round_trip(case):
    rows, xs = case
    k = len(xs)
    # force invertibility: unit diagonal dominance by construction
    a = [
        [rows[i][j] + (Fraction(100) if i == j else Fraction(0)) for j in range(k)]
        for i in range(k)
    ]
    b = [sum(a[i][j] * xs[j] for j in range(k)) for i in range(k)]
    assert solve_rational(a, b) == list(xs)
