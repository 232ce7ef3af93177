from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from pilegames.algebra import ONE, Poly, RatFunc, series_expand
from pilegames.cfinite import ShiftOpPoly
from pilegames.single_player import (
    DENOM_FAMILIES,
    GameSpec,
    annihilator_check,
    closed_form_check,
    closed_form_path_count,
    denom_recurrence,
    dp_prob_series,
    gf_recursive_1m1,
    gf_recursive_1mu,
    gf_recursive_2m1,
    mean_annihilator,
    moments,
    path_count,
    solve_gf,
    split_gf_2m1,
)

HALF = Fraction(1, 2)
THIRD = Fraction(1, 3)


def up_down(up, down, p):
    return GameSpec.up_down(up, down, p)


# ---------------------------------------------------------------- game specs


def test_spec_parse_and_format_round_trip():
    spec = GameSpec.parse("1:1/2,-1:1/2")
    assert spec.steps == (1, -1)
    assert GameSpec.parse(spec.format()) == spec


def test_spec_rejects_bad_input():
    for text in (
        "1:0.5,-1:0.5",      # decimals are not exact
        "1:1/2,-1:1/3",      # does not sum to 1
        "1:1/2,1:1/2",       # duplicate step
        "-1:1/2,-2:1/2",     # no positive step
        "0:1",               # zero step
        "1:1/2;-1:1/2",      # wrong separator
    ):
        with pytest.raises(ValueError):
            GameSpec.parse(text)


# ------------------------------------------------- generating function table


def test_unit_game_small_targets_match_known_forms():
    table = solve_gf(up_down(1, 1, HALF), 2)
    den = Poly.of([1, -HALF, -Fraction(1, 4)])  # 1 - qx - pqx^2 at p = 1/2
    assert table.gf(0) == RatFunc(Poly.of([0, 0, Fraction(1, 4)]), den)
    assert table.gf(1) == RatFunc(Poly.of([0, HALF]) * Poly.of([1, -HALF]), den)
    assert table.gf(2) == ONE


def test_gf_table_absorbed_start_is_one():
    table = solve_gf(up_down(1, 1, THIRD), 3)
    assert table.gf(3) == ONE
    assert table.gf(7) == ONE


def test_three_routes_agree_unit_game():
    for p in (HALF, THIRD):
        spec = up_down(1, 1, p)
        for n in range(0, 6):
            solved = solve_gf(spec, n)
            rec = gf_recursive_1m1(p, n)
            for s in range(n + 1):
                assert rec.gf(s) == solved.gf(s)
                dp = dp_prob_series(spec, n, s, 25)
                assert series_expand(solved.gf(s), 25) == dp


def test_three_routes_agree_drop_games():
    for u in (2, 3):
        spec = up_down(1, u, Fraction(2, 3))
        for n in range(0, 6):
            solved = solve_gf(spec, n)
            rec = gf_recursive_1mu(Fraction(2, 3), u, n)
            for s in range(n + 1):
                assert rec.gf(s) == solved.gf(s)


def test_three_routes_agree_two_up_game():
    spec = up_down(2, 1, THIRD)
    for n in range(0, 6):
        solved = solve_gf(spec, n)
        rec = gf_recursive_2m1(THIRD, n)
        for s in range(n + 1):
            assert rec.gf(s) == solved.gf(s)


def test_two_up_split_components_sum_to_total():
    pairs = split_gf_2m1(THIRD, 4)
    table = solve_gf(up_down(2, 1, THIRD), 4)
    for s, pq in enumerate(pairs):
        assert pq.total == table.gf(s)
        # overshoot weight means both parts are genuinely used
    assert pairs[3].exact_hit != RatFunc.of([0])


def test_normalization_every_game_ends():
    for spec in (up_down(1, 1, HALF), up_down(1, 2, Fraction(2, 3)), up_down(2, 1, THIRD)):
        table = solve_gf(spec, 4)
        for s in range(5):
            assert table.gf(s)(1) == 1


# ---------------------------------------------------------------- path counts


def test_path_count_small_cases_by_hand():
    # unit steps to n=2: +1+1 is the only 2-turn ending
    assert path_count((1, -1), 2, 2, 0) == 1
    # clipping at 0 breaks the parity argument: (-1,+1,+1) walks 0,0,1,2
    assert path_count((1, -1), 2, 3, 0) == 1
    # 4 turns: (+1,-1,+1,+1) and (-1,-1,+1,+1) and nothing else
    assert path_count((1, -1), 2, 4, 0) == 2
    assert path_count((1, -1), 1, k=1, s=0) == 1


def test_path_count_matches_dp_weights_for_fair_coin():
    # with p = 1/2 every k-turn path weighs 2^-k
    spec = up_down(1, 1, HALF)
    for n in range(1, 5):
        for s in range(n):
            probs = dp_prob_series(spec, n, s, 12)
            for k in range(13):
                assert probs.coeff(k) == path_count((1, -1), n, k, s) * HALF**k


def test_closed_form_path_count_full_region():
    for n in range(1, 7):
        for s in range(n + 1):
            for t in range(-n + 1, 2 * n + 1):
                closed = closed_form_path_count(n, t, s)
                if closed is None:
                    continue
                assert closed == path_count((1, -1), n, n + t, s), (n, t, s)


def test_closed_form_path_count_region_boundaries():
    # outside both strips the formula declines to answer
    assert closed_form_path_count(3, 6, 3) is None
    assert closed_form_path_count(2, 5, 0) is None
    assert closed_form_path_count(2, 7, 1) is None
    with pytest.raises(ValueError):
        closed_form_path_count(3, -3, 0)
    with pytest.raises(ValueError):
        closed_form_path_count(3, 1, 4)


# -------------------------------------------------------------------- moments


def test_unit_game_moments_by_hand():
    rep = moments(up_down(1, 1, HALF), 2, 0, 3)
    assert rep.mean == 6
    assert rep.straight[2] == 58
    assert rep.variance == 22
    # start at the target: zero turns, all mass at k = 0
    done = moments(up_down(1, 1, HALF), 2, 2, 3)
    assert done.straight == (1, 0, 0, 0)


def test_geometric_anchor_n1():
    # n=1 from 0 is geometric(p): E[X]=1/p, E[X^2]=(2-p)/p^2
    for p in (HALF, THIRD, Fraction(2, 3)):
        rep = moments(up_down(1, 1, p), 1, 0, 3)
        assert rep.mean == 1 / p
        assert rep.straight[2] == (2 - p) / p**2
        et3 = rep.straight[3]
        assert et3 == (p**2 - 6 * p + 6) / p**3


def test_closed_form_families_agree_with_engine():
    pairs = [(n, s) for n in range(0, 7) for s in range(n + 1)]
    assert closed_form_check("mean_symmetric", pairs).ok
    assert closed_form_check("higher_moments_symmetric", pairs).ok
    assert closed_form_check("central_moments_symmetric", pairs).ok
    for p in (THIRD, Fraction(3, 5)):
        assert closed_form_check("mean_general", pairs, p=p).ok
    for u in (1, 2, 3):
        assert closed_form_check("mean_balanced_drop", pairs, u=u).ok
    assert closed_form_check("mean_drop2_two_thirds", pairs).ok


def test_drop_two_mean_specific_value():
    rep = moments(up_down(1, 2, Fraction(2, 3)), 3, 1, 1)
    assert rep.mean == Fraction(45, 8)


def test_closed_form_check_reports_mismatch_as_data():
    report = closed_form_check("mean_general", [(2, 0)], p=THIRD)
    assert report.ok
    bad = closed_form_check("mean_general", [(2, 0), (2, 1)], p=Fraction(2, 3))
    assert bad.checked == 2


def test_mean_decreases_with_head_start():
    spec = up_down(1, 1, HALF)
    means = [moments(spec, 6, s, 1).mean for s in range(7)]
    assert all(a > b for a, b in zip(means, means[1:]))


# ----------------------------------------------------------------- operators


def test_mean_annihilator_kills_means_both_axes():
    for p in (HALF, THIRD):
        spec = up_down(1, 1, p)
        op = mean_annihilator(p, 1)
        assert annihilator_check(op, "n", spec, 0, 1, range(0, 10)).all_zero
        assert annihilator_check(op, "s", spec, 9, 1, range(0, 10)).all_zero


def test_mean_annihilator_drop_games():
    for u in (2, 3):
        p = Fraction(2, 3)
        spec = up_down(1, u, p)
        op = mean_annihilator(p, u)
        assert op.degree == u + 2
        assert annihilator_check(op, "n", spec, 0, 1, range(0, 12)).all_zero
        assert annihilator_check(op, "s", spec, 11, 1, range(0, 12)).all_zero


def test_second_moment_operators_drop_two():
    p = Fraction(2, 3)
    q = 1 - p
    spec = up_down(1, 2, p)
    along_n = ShiftOpPoly.from_factors(
        [-1, 1], [-1, 1], [-1, 1],
        [q, p],
        [q * q, -(p + 1) * q, p * p],
        [-q, -q, p], [-q, -q, p],
    )
    along_s = ShiftOpPoly.from_factors([-1, 1], [-1, 1], [-1, 1], [-q, -q, p], [-q, -q, p])
    assert along_n.degree == 10 and along_s.degree == 7
    assert annihilator_check(along_n, "n", spec, 0, 2, range(0, 12)).all_zero
    assert annihilator_check(along_s, "s", spec, 11, 2, range(0, 12)).all_zero


def test_non_annihilator_leaves_residue():
    spec = up_down(1, 1, HALF)
    op = ShiftOpPoly.from_factors([-1, 1])  # first difference alone
    assert not annihilator_check(op, "n", spec, 0, 1, range(0, 8)).all_zero


def test_annihilator_check_window_validation():
    spec = up_down(1, 1, HALF)
    op = mean_annihilator(HALF, 1)
    with pytest.raises(ValueError):
        annihilator_check(op, "n", spec, 0, 1, [0, 2, 4])
    with pytest.raises(ValueError):
        annihilator_check(op, "s", spec, 3, 1, range(0, 6))
    with pytest.raises(ValueError):
        annihilator_check(op, "x", spec, 0, 1, range(0, 6))


# -------------------------------------------------------------- denominators


def test_denominator_recurrence_divides_all_reduced_denominators():
    jobs = [
        ("pm1", HALF, 1),
        ("pm1", THIRD, 1),
        ("1mu", Fraction(2, 3), 2),
        ("1mu", Fraction(2, 3), 3),
        ("2m1", THIRD, 1),
    ]
    for family, p, u in jobs:
        if family == "pm1":
            spec = up_down(1, 1, p)
        elif family == "1mu":
            spec = up_down(1, u, p)
        else:
            spec = up_down(2, 1, p)
        for n in range(1, 8):
            den = denom_recurrence(family, p, n, u=u)
            assert den.coeff(0) == 1
            table = solve_gf(spec, n)
            for s in range(n + 1):
                reduced = table.gf(s).den
                _, rem = den.divmod(reduced)
                assert rem == Poly.of([]), (family, p, n, s)


def test_denominator_family_names():
    assert set(DENOM_FAMILIES) == {"pm1", "1mu", "2m1"}
    with pytest.raises(ValueError):
        denom_recurrence("nope", HALF, 3)


def test_two_up_denominator_matches_displayed_form():
    den = denom_recurrence("2m1", THIRD, 3)
    p, q = THIRD, Fraction(2, 3)
    assert den == Poly.of([1, -q, 0, -p * q * q])


# ------------------------------------------------------------ property tests


small_specs = st.sampled_from(
    [
        up_down(1, 1, HALF),
        up_down(1, 1, THIRD),
        up_down(1, 2, Fraction(2, 3)),
        up_down(2, 1, THIRD),
        GameSpec.parse("2:1/6,1:1/3,-1:1/2"),
        GameSpec.parse("3:1/5,-2:4/5"),
    ]
)


@settings(deadline=None, max_examples=40)
@given(small_specs, st.integers(1, 4))
def test_dp_is_a_probability_distribution(spec, n):
    for s in range(n + 1):
        probs = dp_prob_series(spec, n, s, 40)
        assert all(c >= 0 for c in probs.coeffs)
        running = probs.partial_sums()
        assert all(a <= 1 for a in running.coeffs)
        assert all(a <= b for a, b in zip(running.coeffs, running.coeffs[1:]))


@settings(deadline=None, max_examples=30)
@given(small_specs, st.integers(1, 4))
def test_gf_solution_reproduces_dp(spec, n):
    table = solve_gf(spec, n)
    for s in range(n + 1):
        assert table.gf(s)(1) == 1
        assert series_expand(table.gf(s), 20) == dp_prob_series(spec, n, s, 20)
