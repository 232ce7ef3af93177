"""Single-player pile games with a floor at zero and an absorbing target.

A player starts with `s` chips and repeatedly draws a step from a fixed
finite choice set (each step with a fixed positive probability).  The pile
never goes below zero: a negative step clips at the floor.  The game ends
the first time the pile reaches the target `n` or overshoots it.

This module computes the turn-count distribution three independent ways

* a direct dynamic program over states (`dp_prob_series`, `path_count`),
* the linear system for the generating functions (`solve_gf`),
* family-specific recursive constructions (`gf_recursive_*`),

plus exact moments, closed-form cross-checks, shift-operator recurrence
checks, and the closed-form end-count formula for unit steps.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Optional, Sequence

from .algebra import (
    ONE,
    ONE_POLY,
    Poly,
    RatFunc,
    RationalLike,
    Series,
    X_POLY,
    parse_rational,
    poly_lcm,
    xdx,
)
from .cfinite import ShiftOpPoly, apply_shift_annihilator
from .linear import solve_ratfunc


@dataclass(frozen=True, slots=True)
class GameSpec:
    """The choice set of a pile game: distinct nonzero integer steps with
    positive rational probabilities summing to one.

    Text form: "step:prob,step:prob,...", e.g. "1:1/2,-1:1/2".  Decimal
    probabilities are rejected; the whole engine is exact.
    """

    choices: tuple[tuple[int, Fraction], ...]

    def __post_init__(self) -> None:
        if not self.choices:
            raise ValueError("empty choice set")
        steps = [step for step, _ in self.choices]
        if len(set(steps)) != len(steps):
            raise ValueError("steps must be distinct")
        if any(step == 0 for step in steps):
            raise ValueError("steps must be nonzero")
        if not any(step > 0 for step in steps):
            raise ValueError("need at least one positive step, or no game ever ends")
        if any(prob <= 0 for _, prob in self.choices):
            raise ValueError("probabilities must be positive")
        if sum(prob for _, prob in self.choices) != 1:
            raise ValueError("probabilities must sum to 1")

    @staticmethod
    def of(pairs: Iterable[tuple[int, RationalLike]]) -> "GameSpec":
        return GameSpec(tuple((int(step), Fraction(prob)) for step, prob in pairs))

    @staticmethod
    def parse(text: str) -> "GameSpec":
        pairs = []
        for part in text.split(","):
            chunk = part.strip()
            if ":" not in chunk:
                raise ValueError(f"bad choice {chunk!r}, expected 'step:prob'")
            step_text, prob_text = chunk.split(":", 1)
            pairs.append((int(step_text.strip()), parse_rational(prob_text)))
        return GameSpec.of(pairs)

    @staticmethod
    def up_down(up: int, down: int, p: RationalLike) -> "GameSpec":
        """Two-choice game: +up with probability p, -down otherwise."""
        p = Fraction(p)
        return GameSpec.of([(up, p), (-down, 1 - p)])

    def format(self) -> str:
        return ",".join(f"{step}:{prob}" for step, prob in self.choices)

    @property
    def steps(self) -> tuple[int, ...]:
        return tuple(step for step, _ in self.choices)

    def __str__(self) -> str:
        return self.format()


def _clip(state: int, step: int) -> int:
    return max(0, state + step)


def dp_prob_series(spec: GameSpec, n: int, s: int, order: int) -> Series:
    """P(game from s ends exactly at turn k), k = 0..order, by the state DP."""
    if n < 0 or s < 0 or order < 0:
        raise ValueError("n, s and order must be >= 0")
    if s >= n:
        return Series.of([1] + [0] * order)
    absorb = [Fraction(0)] * n
    moves: list[list[tuple[int, Fraction]]] = [[] for _ in range(n)]
    for state in range(n):
        for step, prob in spec.choices:
            if state + step >= n:
                absorb[state] += prob
            else:
                moves[state].append((_clip(state, step), prob))
    out = [Fraction(0)]
    prev = [Fraction(0)] * n
    for k in range(1, order + 1):
        cur = []
        for state in range(n):
            acc = absorb[state] if k == 1 else Fraction(0)
            for target, prob in moves[state]:
                acc += prob * prev[target]
            cur.append(acc)
        out.append(cur[s])
        prev = cur
    return Series(tuple(out))


def path_count(steps: Iterable[int], n: int, k: int, s: int = 0) -> int:
    """Number of k-step sequences from s that end (reach >= n) exactly at k.

    Same dynamic program as `dp_prob_series` with every choice weighted 1.
    """
    steps = tuple(int(v) for v in steps)
    if len(set(steps)) != len(steps):
        raise ValueError("steps must be distinct")
    if n < 0 or s < 0 or k < 0:
        raise ValueError("n, s and k must be >= 0")
    if s >= n:
        return 1 if k == 0 else 0
    if k == 0:
        return 0
    absorb = [0] * n
    moves: list[list[int]] = [[] for _ in range(n)]
    for state in range(n):
        for step in steps:
            if state + step >= n:
                absorb[state] += 1
            else:
                moves[state].append(_clip(state, step))
    prev = [0] * n
    for turn in range(1, k + 1):
        cur = []
        for state in range(n):
            acc = absorb[state] if turn == 1 else 0
            for target in moves[state]:
                acc += prev[target]
            cur.append(acc)
        prev = cur
    return prev[s]


@dataclass(frozen=True, slots=True)
class GFTable:
    """Turn-count generating functions for one target: entry s of `gfs`
    is the GF from start s, for s = 0..n (entry n is the constant 1)."""

    n: int
    spec: GameSpec
    gfs: tuple[RatFunc, ...]

    def gf(self, s: int) -> RatFunc:
        if s < 0:
            raise ValueError("start must be >= 0")
        return self.gfs[s] if s <= self.n else ONE


@lru_cache(maxsize=256)
def solve_gf(spec: GameSpec, n: int) -> GFTable:
    """All GFs for target n by solving the linear system over Q(x).

    Unknowns G_0..G_{n-1}; each state equation reads
    G_s = x * sum_choices p * (1 if the move ends the game else G_target).
    """
    if n < 0:
        raise ValueError("n must be >= 0")
    if n == 0:
        return GFTable(0, spec, (ONE,))
    rows: list[list[Poly]] = []
    rhs: list[Poly] = []
    for state in range(n):
        row = [Poly.of([1]) if c == state else Poly.of([]) for c in range(n)]
        free = Fraction(0)
        for step, prob in spec.choices:
            if state + step >= n:
                free += prob
            else:
                target = _clip(state, step)
                row[target] = row[target] - X_POLY.scale(prob)
        rows.append(row)
        rhs.append(X_POLY.scale(free))
    sols = solve_ratfunc(rows, rhs)
    return GFTable(n, spec, tuple(sols) + (ONE,))


def _check_p(p: Fraction) -> tuple[Fraction, Fraction]:
    p = Fraction(p)
    if not 0 < p < 1:
        raise ValueError("p must be strictly between 0 and 1")
    return p, 1 - p


def gf_recursive_1mu(p: RationalLike, u: int, n: int) -> GFTable:
    """GF table for steps {+1, -u} built by the reciprocal recursion.

    With F(m) the GF from 0 chips to target m (F(m) = 1 for m <= 0),
        1/F(m) = 1/(p x F(m-1)) - q/(p F(m-u-1)),
    and the GF from start s is F(n)/F(s): with unit up-steps a game to n
    must pass through s, and the leg below s never sees the target.
    """
    p, q = _check_p(Fraction(p))
    if u < 1:
        raise ValueError("u must be >= 1")
    if n < 0:
        raise ValueError("n must be >= 0")
    px = RatFunc.of([0, p])
    full: dict[int, RatFunc] = {}

    def f(m: int) -> RatFunc:
        return full[m] if m > 0 else ONE

    for m in range(1, n + 1):
        inv = ONE / (px * f(m - 1)) - RatFunc.const(q / p) / f(m - u - 1)
        full[m] = ONE / inv
    gfs = tuple(f(n) / f(s) for s in range(n + 1))
    return GFTable(n, GameSpec.up_down(1, u, p), gfs)


def gf_recursive_1m1(p: RationalLike, n: int) -> GFTable:
    """GF table for the symmetric-step game {+1, -1}; the u = 1 drop case."""
    return gf_recursive_1mu(p, 1, n)


@dataclass(frozen=True, slots=True)
class PQPair:
    """Split of a {+2, -1} game's GF by how the game ends: landing exactly
    on the target, or overshooting it by one."""

    exact_hit: RatFunc
    overshoot: RatFunc

    @property
    def total(self) -> RatFunc:
        return self.exact_hit + self.overshoot


def split_gf_2m1(p: RationalLike, n: int) -> tuple[PQPair, ...]:
    """Exact-hit/overshoot GF pairs for steps {+2, -1}, starts s = 0..n.

    Built row by row over targets m: the top entries (s = m-1) come from
    the one-step relations
        overshoot(m, m-1) = p x / (1 - q x * exact(m-1, m-2)),
        exact(m, m-1)     = (q/p) * overshoot(m, m-1) * overshoot(m-1, m-2),
    and the rest by splicing paths at level m-1: a game to m from s first
    reaches m-1 exactly (then plays on) or jumps straight past it.
    """
    p, q = _check_p(Fraction(p))
    if n < 0:
        raise ValueError("n must be >= 0")
    px = RatFunc.of([0, p])
    qx = RatFunc.of([0, q])
    row = [PQPair(ONE, RatFunc.const(0))]
    if n == 0:
        return tuple(row)
    row = [PQPair(RatFunc.const(0), px / RatFunc.of([1, -q])), PQPair(ONE, RatFunc.const(0))]
    for m in range(2, n + 1):
        over_top = px / (ONE - qx * row[m - 2].exact_hit)
        exact_top = RatFunc.const(q / p) * over_top * row[m - 2].overshoot
        new_row = []
        for s in range(m - 1):
            new_row.append(
                PQPair(
                    exact_top * row[s].exact_hit + row[s].overshoot,
                    over_top * row[s].exact_hit,
                )
            )
        new_row.append(PQPair(exact_top, over_top))
        new_row.append(PQPair(ONE, RatFunc.const(0)))
        row = new_row
    return tuple(row)


def gf_recursive_2m1(p: RationalLike, n: int) -> GFTable:
    """GF table for steps {+2, -1} assembled from the end-split recursion."""
    pairs = split_gf_2m1(p, n)
    return GFTable(n, GameSpec.up_down(2, 1, Fraction(p)), tuple(pair.total for pair in pairs))


DENOM_FAMILIES = ("pm1", "1mu", "2m1")


def denom_recurrence(family: str, p: RationalLike, n: int, u: int = 1) -> Poly:
    """Common-denominator polynomial for target n by the family recurrence.

    families: "pm1" = steps {+1,-1}; "1mu" = {+1,-u} (pass u); "2m1" = {+2,-1}.
    Recurrences
        D(m) = D(m-1) - q p^u x^(u+1) D(m-u-1)      for {+1,-u}  (pm1: u = 1)
        D(m) = D(m-1) - p q^2 x^3 D(m-3)            for {+2,-1}
    seeded with the least common multiple of the reduced solver denominators
    for the first few targets.  Every reduced GF denominator for target n
    divides the returned polynomial.
    """
    p, q = _check_p(Fraction(p))
    if n < 0:
        raise ValueError("n must be >= 0")
    if family == "pm1":
        family, u = "1mu", 1
    if family == "1mu":
        if u < 1:
            raise ValueError("u must be >= 1")
        spec = GameSpec.up_down(1, u, p)
        lag, factor = u + 1, Poly.of([0] * (u + 1) + [q * p**u])
    elif family == "2m1":
        spec = GameSpec.up_down(2, 1, p)
        lag, factor = 3, Poly.of([0, 0, 0, p * q * q])
    else:
        raise ValueError(f"unknown family {family!r}")
    seeds = []
    for m in range(min(n, lag - 1) + 1):
        table = solve_gf(spec, m)
        acc = ONE_POLY
        for g in table.gfs:
            acc = poly_lcm(acc, g.den)
        low = acc.lowest_term()[1]
        seeds.append(acc.scale(1 / low))
    if n < lag:
        return seeds[n]
    ds = list(seeds)
    for m in range(lag, n + 1):
        ds.append(ds[m - 1] - factor * ds[m - lag])
    return ds[n]


def closed_form_path_count(n: int, t: int, s: int = 0) -> Optional[int]:
    """End count b(n+t) for unit steps {+1,-1} in closed form, else None.

    For 0 <= s <= n and t > -n the number of (n+t)-step sequences from s
    that first reach n at the last step is
        (n-s)/(n+t) * C(n+t, (t+s)/2)        if t+s is even and t-s <= 2n,
        (n+s+1)/(n+t) * C(n+t, (t-s-1)/2)    if t+s is odd and t+s < 2n.
    Outside those strips the formula stops counting paths and None is
    returned; use `path_count` there.
    """
    if not 0 <= s <= n:
        raise ValueError("need 0 <= s <= n")
    if t <= -n:
        raise ValueError("need t > -n")
    if (t + s) % 2 == 0:
        if t - s > 2 * n:
            return None
        j = (t + s) // 2
        hits = Fraction((n - s) * math.comb(n + t, j), n + t) if j >= 0 else Fraction(0)
    else:
        if t + s >= 2 * n:
            return None
        j = (t - s - 1) // 2
        hits = Fraction((n + s + 1) * math.comb(n + t, j), n + t) if j >= 0 else Fraction(0)
    if hits.denominator != 1:
        raise AssertionError(f"non-integer count at n={n} t={t} s={s}")
    return int(hits)


@dataclass(frozen=True, slots=True)
class MomentReport:
    """Exact turn-count moments: straight[r] = E[X^r], central[r] = E[(X-mu)^r],
    both indexed r = 0..r_max."""

    n: int
    s: int
    r_max: int
    straight: tuple[Fraction, ...]
    central: tuple[Fraction, ...]

    @property
    def mean(self) -> Fraction:
        return self.straight[1]

    @property
    def variance(self) -> Fraction:
        return self.central[2]


def central_from_straight(straight: Sequence[Fraction]) -> tuple[Fraction, ...]:
    """Moments about the mean from straight moments, by binomial expansion."""
    mu = straight[1] if len(straight) > 1 else Fraction(0)
    central = []
    for r in range(len(straight)):
        acc = Fraction(0)
        for i in range(r + 1):
            acc += math.comb(r, i) * straight[i] * (-mu) ** (r - i)
        central.append(acc)
    return tuple(central)


def moments_of_gf(f: RatFunc, r_max: int) -> tuple[tuple[Fraction, ...], tuple[Fraction, ...]]:
    """Straight and central moments of the distribution with PGF f.

    Applies x*d/dx r times and evaluates at 1, so straight[r] = sum k^r f_k;
    central moments follow by binomial expansion about the mean.
    """
    if r_max < 0:
        raise ValueError("r_max must be >= 0")
    straight = [f(1)]
    g = f
    for _ in range(r_max):
        g = xdx(g)
        straight.append(g(1))
    return tuple(straight), central_from_straight(straight)


@lru_cache(maxsize=4096)
def moments(spec: GameSpec, n: int, s: int, r_max: int) -> MomentReport:
    """Exact moments of the turn count from start s to target n."""
    f = solve_gf(spec, n).gf(s)
    straight, central = moments_of_gf(f, r_max)
    return MomentReport(n, s, r_max, straight, central)


@lru_cache(maxsize=None)
def drop_mean_seed(u: int, n: int) -> Fraction:
    """C(n) with C(n) = 2C(n-1) + 1 - C(n-u-1), C(0..-u) = 0; the balanced
    {+1,-u} mean from start s is 2[C(n) - C(s)]."""
    if u < 1:
        raise ValueError("u must be >= 1")
    if n <= 0:
        return Fraction(0)
    return 2 * drop_mean_seed(u, n - 1) + 1 - drop_mean_seed(u, n - u - 1)


def mean_unit_balanced(n: int, s: int) -> Fraction:
    return Fraction(n * (n + 1) - s * (s + 1))


def second_moment_unit_balanced(n: int, s: int) -> Fraction:
    return Fraction((n - s) * (n + s + 1) * (5 * n**2 + 5 * n - s**2 - s - 1), 3)


def third_moment_unit_balanced(n: int, s: int) -> Fraction:
    # sanity anchor: n=1, s=0 is geometric(1/2), sum k^3/2^k = 26
    poly = (
        61 * n**4
        + 122 * n**3
        - (14 * s**2 + 14 * s - 38) * n**2
        - (14 * s**2 + 14 * s + 23) * n
        + s**4
        + 2 * s**3
        + 8 * s**2
        + 7 * s
        - 3
    )
    return Fraction((n - s) * (n + s + 1) * poly, 15)


def variance_unit_balanced(n: int, s: int) -> Fraction:
    return Fraction((n - s) * (n + s + 1) * (2 * n**2 + 2 * n + 2 * s**2 + 2 * s - 1), 3)


def central_third_unit_balanced(n: int, s: int) -> Fraction:
    poly = (
        16 * n**4
        + 32 * n**3
        + 8 * n**2 * (2 * s**2 + 2 * s + 1)
        + 8 * n * (2 * s**2 + 2 * s - 1)
        + 16 * s**4
        + 32 * s**3
        + 8 * s**2
        - 8 * s
        - 3
    )
    return Fraction((n - s) * (n + s + 1) * poly, 15)


def mean_unit_general(p: Fraction, n: int, s: int) -> Fraction:
    p, q = _check_p(p)
    if p == Fraction(1, 2):
        raise ValueError("the balanced case has its own formula")
    ratio = q / p
    top = (2 * p - 1) * n + q * ratio**n - ((2 * p - 1) * s + q * ratio**s)
    return top / (2 * p - 1) ** 2


def mean_drop2_two_thirds(n: int, s: int) -> Fraction:
    half = Fraction(-1, 2)
    return (
        Fraction(n * (3 * n + 5), 6)
        - Fraction(1, 9) * half**n
        - (Fraction(s * (3 * s + 5), 6) - Fraction(1, 9) * half**s)
    )


@dataclass(frozen=True, slots=True)
class ClosedFormReport:
    """Result of checking a closed-form moment formula against the engine.
    A mismatch is data (listed), not an exception."""

    which: str
    p: Fraction
    u: int
    checked: int
    mismatches: tuple[tuple[int, int, Fraction, Fraction], ...]

    @property
    def ok(self) -> bool:
        return not self.mismatches


CLOSED_FORMS = (
    "mean_symmetric",
    "higher_moments_symmetric",
    "central_moments_symmetric",
    "mean_general",
    "mean_balanced_drop",
    "mean_drop2_two_thirds",
)


def closed_form_check(
    which: str,
    pairs: Iterable[tuple[int, int]],
    p: Optional[RationalLike] = None,
    u: int = 1,
) -> ClosedFormReport:
    """Compare a closed-form moment formula with the generic moment engine
    over the given (n, s) pairs.  See CLOSED_FORMS for the known formulas."""
    half = Fraction(1, 2)
    if which == "mean_symmetric":
        p_val, u, cases = half, 1, [(1, mean_unit_balanced)]
    elif which == "higher_moments_symmetric":
        p_val, u = half, 1
        cases = [(2, second_moment_unit_balanced), (3, third_moment_unit_balanced)]
    elif which == "central_moments_symmetric":
        p_val, u = half, 1
        cases = [(-2, variance_unit_balanced), (-3, central_third_unit_balanced)]
    elif which == "mean_general":
        if p is None:
            raise ValueError("mean_general needs p != 1/2")
        p_val, u = Fraction(p), 1
        cases = [(1, lambda n, s: mean_unit_general(p_val, n, s))]
    elif which == "mean_balanced_drop":
        if u < 1:
            raise ValueError("u must be >= 1")
        p_val = half
        cases = [(1, lambda n, s: 2 * (drop_mean_seed(u, n) - drop_mean_seed(u, s)))]
    elif which == "mean_drop2_two_thirds":
        p_val, u = Fraction(2, 3), 2
        cases = [(1, mean_drop2_two_thirds)]
    else:
        raise ValueError(f"unknown closed form {which!r}")
    spec = GameSpec.up_down(1, u, p_val)
    r_need = max(abs(r) for r, _ in cases)
    mismatches = []
    checked = 0
    for n, s in pairs:
        report = moments(spec, n, s, r_need)
        for r, formula in cases:
            got = report.straight[r] if r > 0 else report.central[-r]
            want = formula(n, s)
            checked += 1
            if got != want:
                mismatches.append((n, s, want, got))
    return ClosedFormReport(which, p_val, u, checked, tuple(mismatches))


@dataclass(frozen=True, slots=True)
class AnnihilatorReport:
    """Residuals of a shift-operator recurrence over a moment window."""

    axis: str
    r: int
    window: tuple[int, ...]
    data: tuple[Fraction, ...]
    residuals: tuple[Fraction, ...]

    @property
    def all_zero(self) -> bool:
        return all(v == 0 for v in self.residuals)


def annihilator_check(
    op: ShiftOpPoly,
    axis: str,
    spec: GameSpec,
    fixed: int,
    r: int,
    window: Sequence[int],
) -> AnnihilatorReport:
    """Apply a shift-operator recurrence to E[X^r] along one index.

    axis "n": data(i) = E[X^r] to target window[i] from fixed start;
    axis "s": data(i) = E[X^r] to fixed target from start window[i].
    The window must be consecutive and stay inside 0 <= s <= n.
    """
    window = tuple(window)
    if any(b - a != 1 for a, b in zip(window, window[1:])) or not window:
        raise ValueError("window must be a nonempty run of consecutive integers")
    if axis == "n":
        if not 0 <= fixed <= window[0]:
            raise ValueError("need 0 <= s <= every n in the window")
        data = [moments(spec, m, fixed, r).straight[r] for m in window]
    elif axis == "s":
        if window[0] < 0 or window[-1] > fixed:
            raise ValueError("need 0 <= every s <= n")
        data = [moments(spec, fixed, m, r).straight[r] for m in window]
    else:
        raise ValueError("axis must be 'n' or 's'")
    residuals = apply_shift_annihilator(op, data)
    return AnnihilatorReport(axis, r, window, tuple(data), tuple(residuals.coeffs))


def mean_annihilator(p: RationalLike, u: int = 1) -> ShiftOpPoly:
    """The operator (T-1)^2 (p T^u - q (T^(u-1) + ... + 1)) that kills the
    mean turn count of the {+1,-u} game along either index."""
    p, q = _check_p(Fraction(p))
    if u < 1:
        raise ValueError("u must be >= 1")
    tail = [-q] * u + [p]
    return ShiftOpPoly.from_factors([-1, 1], [-1, 1], tail)
