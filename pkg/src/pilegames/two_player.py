"""Two-player pile-game races.

Both players play the same game toward the same target n, moving
alternately (player one first); each keeps their own pile with its own
floor at zero.  Whoever reaches the target on their own move first wins.

With B(k, s) the single-player probability of ending exactly at turn k
from start s, and C(k, s) = 1 - sum_{i<=k} B(i, s) the survival weight,

    win(k)  = B(k, s1) * C(k-1, s2)   first mover wins at their turn k,
    lose(k) = C(k, s1) * B(k, s2)     second mover wins at their turn k.

Both are termwise products of C-finite sequences, so their generating
functions W and L are rational with denominator degree at most n(n+1);
`guess_WL` recovers them exactly from series data and certifies the fit
against every computed term.  The total-turn generating function is
T(x) = W(x^2)/x + L(x^2), since round k is turn 2k-1 for player one and
turn 2k for player two.

The exact win probability W(1) is also computed two independent ways:
from the absorbed two-player linear system at x = 1, and (for fair
two-choice games) from the squared-series identity
W(1) = 1/2 + 1/2 * sum_k B(k, s)^2, which holds because the game is a
symmetric race apart from ties broken in the first mover's favor.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .algebra import ONE, RatFunc, RationalLike, Series, X, series_expand
from .cfinite import CFiniteRec, guess_recurrence, rec_to_ratfunc
from .fixtures import first_win_probabilities
from .linear import solve_rational
from .single_player import GameSpec, central_from_straight, dp_prob_series, moments_of_gf


class GuessBoundError(RuntimeError):
    """Series data did not fit a recurrence within its proven order bound.

    For the win/lose series the bound is a theorem, so failing to fit (or
    fitting something that does not reproduce the data) means a bug, not a
    mathematical discovery; it is raised loudly rather than returned.
    """


def _survival(end_probs: Series) -> list[Fraction]:
    alive = Fraction(1)
    out = []
    for b in end_probs.coeffs:
        alive -= b
        out.append(alive)
    return out


def win_series(spec: GameSpec, n: int, s1: int, s2: int, order: int) -> Series:
    """P(first mover wins at their turn k), k = 0..order; term 0 is nonzero
    only when the first mover starts at or past the target."""
    b1 = dp_prob_series(spec, n, s1, order).coeffs
    c2 = _survival(dp_prob_series(spec, n, s2, order))
    out = [b1[0]]
    for k in range(1, order + 1):
        out.append(b1[k] * c2[k - 1])
    return Series(tuple(out))


def lose_series(spec: GameSpec, n: int, s1: int, s2: int, order: int) -> Series:
    """P(second mover wins at their turn k), k = 0..order."""
    c1 = _survival(dp_prob_series(spec, n, s1, order))
    b2 = dp_prob_series(spec, n, s2, order).coeffs
    return Series(tuple(c1[k] * b2[k] for k in range(order + 1)))


def _max_up(spec: GameSpec) -> int:
    return max(step for step in spec.steps if step > 0)


def _certified_fit(terms: Series, bound: int, label: str) -> RatFunc:
    rec = guess_recurrence(terms, bound)
    if rec is None:
        raise GuessBoundError(f"{label}: no recurrence of order <= {bound} fits")
    gf = rec_to_ratfunc(rec)
    if series_expand(gf, terms.order).coeffs != terms.coeffs:
        raise GuessBoundError(f"{label}: fitted function does not reproduce the data")
    return gf


def guess_WL(spec: GameSpec, n: int, s1: int = 0, s2: int = 0) -> tuple[RatFunc, RatFunc]:
    """Exact win and lose generating functions for the race to n.

    Expands both series past twice the n(n+1) order bound (plus allowance
    for the leading zeros before the first possible win), fits the minimal
    recurrences, and verifies the fits against every computed term.
    """
    if n < 0:
        raise ValueError("n must be >= 0")
    bound = n * (n + 1)
    lead = (n + _max_up(spec) - 1) // _max_up(spec)
    order = 2 * bound + lead + 12
    w = win_series(spec, n, s1, s2, order)
    lo = lose_series(spec, n, s1, s2, order)
    win_gf = _certified_fit(w, bound, f"win series n={n}")
    lose_gf = _certified_fit(lo, bound, f"lose series n={n}")
    return win_gf, lose_gf


def make_T(win_gf: RatFunc, lose_gf: RatFunc) -> RatFunc:
    """Total-turn generating function W(x^2)/x + L(x^2).

    Round k of the winner is turn 2k-1; of the loser, turn 2k.  Requires
    the win series to start after turn 0, except for the already-decided
    race (W = 1, L = 0) whose total-turn function is the constant 1.
    """
    num0 = win_gf.num.coeff(0)
    if num0 != 0:
        if win_gf == ONE and lose_gf.is_zero:
            return ONE
        raise ValueError("win series has weight at turn 0 but is not the decided race")
    return win_gf.stretch(2) / X + lose_gf.stretch(2)


def winprob_exact(spec: GameSpec, n: int) -> Fraction:
    """P(first mover wins) from the two-player linear system at x = 1.

    One unknown per pair of piles (s1, s2) in [0, n]^2; pairs at the
    target row/column are pinned to 1 (first mover already won) and 0
    (second mover holds the target while the first does not).
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    size = n + 1

    def at(a: int, b: int) -> int:
        return a * size + b

    rows: list[list[Fraction]] = []
    rhs: list[Fraction] = []
    zero_row = [Fraction(0)] * (size * size)
    for a in range(size):
        for b in range(size):
            row = zero_row.copy()
            if a == n:
                row[at(a, b)] = Fraction(1)
                rows.append(row)
                rhs.append(Fraction(1))
                continue
            if b == n:
                row[at(a, b)] = Fraction(1)
                rows.append(row)
                rhs.append(Fraction(0))
                continue
            row[at(a, b)] = Fraction(1)
            for step1, p1 in spec.choices:
                t1 = min(max(0, a + step1), n)
                for step2, p2 in spec.choices:
                    t2 = min(max(0, b + step2), n)
                    row[at(t1, t2)] -= p1 * p2
            rows.append(row)
            rhs.append(Fraction(0))
    sol = solve_rational(rows, rhs)
    return sol[at(0, 0)]


def winprob_squares(spec: GameSpec, n: int, s: int = 0) -> Fraction:
    """P(first mover wins) via 1/2 + 1/2 * sum_k B(k, s)^2.

    Only for fair two-choice games (both probabilities 1/2) starting from
    equal piles: by symmetry each player is equally likely to be strictly
    first, and the squared sum is exactly the probability they would
    finish on the same round, which the first mover wins.
    """
    if len(spec.choices) != 2 or any(p != Fraction(1, 2) for _, p in spec.choices):
        raise ValueError("squared-series route needs two choices of probability 1/2")
    if n < 1:
        raise ValueError("n must be >= 1")
    bound = n * n
    lead = (n + _max_up(spec) - 1) // _max_up(spec)
    order = 2 * bound + lead + 12
    b = dp_prob_series(spec, n, s, order)
    gf = _certified_fit(b.hadamard(b), bound, f"squared end series n={n}")
    return Fraction(1, 2) + Fraction(1, 2) * gf(1)


@dataclass(frozen=True, slots=True)
class TwoPlayerResult:
    """Exact generating functions and win probability for one race."""

    n: int
    s1: int
    s2: int
    win_gf: RatFunc
    lose_gf: RatFunc
    total_gf: RatFunc
    first_win_prob: Fraction
    denominator_degree_bound: int


def two_player_result(spec: GameSpec, n: int, s1: int = 0, s2: int = 0) -> TwoPlayerResult:
    win_gf, lose_gf = guess_WL(spec, n, s1, s2)
    wbar = win_gf(1)
    if wbar + lose_gf(1) != 1:
        raise GuessBoundError(f"win and lose weights do not sum to 1 for n={n}")
    return TwoPlayerResult(
        n, s1, s2, win_gf, lose_gf, make_T(win_gf, lose_gf), wbar, n * (n + 1)
    )


@dataclass(frozen=True, slots=True)
class EndgameMoments:
    """Moments of the two endgame clocks of a race from (0, 0):
    rounds until the first mover wins (conditioned on that), and total
    turns until either player wins."""

    n: int
    r_max: int
    first_win_prob: Fraction
    winner_rounds_straight: tuple[Fraction, ...]
    winner_rounds_central: tuple[Fraction, ...]
    total_turns_straight: tuple[Fraction, ...]
    total_turns_central: tuple[Fraction, ...]


def endgame_moments(spec: GameSpec, n: int, r_max: int = 10) -> EndgameMoments:
    """Exact straight and central moments, r = 0..r_max, of both clocks.

    The winner-round moments are the moments of W normalized by W(1);
    the total-turn moments come straight from T, which is a proper PGF.
    """
    result = two_player_result(spec, n)
    raw_w, _ = moments_of_gf(result.win_gf, r_max)
    wbar = result.first_win_prob
    y_straight = tuple(v / wbar for v in raw_w)
    z_straight, z_central = moments_of_gf(result.total_gf, r_max)
    return EndgameMoments(
        n,
        r_max,
        wbar,
        y_straight,
        central_from_straight(y_straight),
        z_straight,
        z_central,
    )


@dataclass(frozen=True, slots=True)
class HolonomyReport:
    """Evidence about whether the first-win probability sequence w(1..N)
    satisfies any constant-coefficient linear recurrence."""

    spec: GameSpec
    n_max: int
    values: tuple[Fraction, ...]
    fixture_consistent: Optional[bool]
    sequence_length: int
    max_order: int
    fit: Optional[CFiniteRec]

    @property
    def recurrence_found(self) -> bool:
        return self.fit is not None


STANDARD_RACE = GameSpec.up_down(1, 1, Fraction(1, 2))


def holonomy_evidence(spec: GameSpec, n_max: int) -> HolonomyReport:
    """Compute w(n) for n = 1..n_max and hunt for a linear recurrence.

    For the standard symmetric unit-step race the computed values are
    checked against the shipped 15-value fixture and the full fixture is
    used for the hunt, giving the longest available window.  The hunted
    order is the largest the data length L can certify, (L - 5) // 2.
    """
    if n_max < 1:
        raise ValueError("n_max must be >= 1")
    values = tuple(winprob_exact(spec, n) for n in range(1, n_max + 1))
    fixture_consistent: Optional[bool] = None
    sequence = values
    if spec == STANDARD_RACE:
        fixture = first_win_probabilities()
        overlap = min(n_max, len(fixture))
        fixture_consistent = values[:overlap] == fixture[:overlap]
        if fixture_consistent and len(fixture) > len(values):
            sequence = fixture
    max_order = max((len(sequence) - 5) // 2, 0)
    fit = guess_recurrence(sequence, max_order)
    return HolonomyReport(
        spec, n_max, values, fixture_consistent, len(sequence), max_order, fit
    )
