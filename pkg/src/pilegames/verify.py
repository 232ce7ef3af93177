"""Cross-validation pipelines tying the independent routes together.

Each family check recomputes the same quantities along genuinely
different routes (state dynamic program, linear solve over Q(x), the
family's recursive construction, denominator recurrences, two-player
series vs fitted functions vs the x = 1 system) and reports one case per
game instance.  A failed case is data in the report, not an exception;
callers decide what a mismatch is worth.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .algebra import series_expand
from .fixtures import first_win_probabilities
from .single_player import (
    GameSpec,
    denom_recurrence,
    dp_prob_series,
    gf_recursive_1mu,
    gf_recursive_2m1,
    solve_gf,
    split_gf_2m1,
)
from .two_player import (
    STANDARD_RACE,
    holonomy_evidence,
    two_player_result,
    winprob_exact,
    winprob_squares,
)

DEFAULT_PS = (Fraction(1, 2), Fraction(1, 3), Fraction(2, 3))
SERIES_TERMS = 30

FAMILIES = ("pm1", "1mu", "2m1", "twoplayer", "holonomy", "all")


@dataclass(frozen=True, slots=True)
class VerifyCase:
    name: str
    ok: bool
    detail: str


@dataclass(frozen=True, slots=True)
class VerifyReport:
    cases: tuple[VerifyCase, ...]

    @property
    def ok(self) -> bool:
        return all(case.ok for case in self.cases)


def _single_family_cases(
    family: str, nmax: int, ps: Sequence[Fraction], u: int
) -> list[VerifyCase]:
    cases = []
    for p in ps:
        if family == "2m1":
            spec = GameSpec.up_down(2, 1, p)
        else:
            spec = GameSpec.up_down(1, u, p)
        for n in range(nmax + 1):
            problems = []
            table = solve_gf(spec, n)
            if family == "2m1":
                recursive = gf_recursive_2m1(p, n)
            else:
                recursive = gf_recursive_1mu(p, u, n)
            if table.gfs != recursive.gfs:
                problems.append("solver and recursive tables disagree")
            for s in range(n + 1):
                direct = dp_prob_series(spec, n, s, SERIES_TERMS)
                if series_expand(table.gf(s), SERIES_TERMS) != direct:
                    problems.append(f"series disagree at s={s}")
                    break
            if family == "2m1":
                pairs = split_gf_2m1(p, n)
                if tuple(pair.total for pair in pairs) != table.gfs:
                    problems.append("end-split parts do not sum to the GF")
            denom = denom_recurrence(family, p, n, u=u)
            for s in range(n + 1):
                if not denom.divmod(table.gf(s).den)[1].is_zero:
                    problems.append(f"denominator at s={s} does not divide the recurrence value")
                    break
            cases.append(
                VerifyCase(
                    f"{family} u={u} p={p} n={n}" if family == "1mu" else f"{family} p={p} n={n}",
                    not problems,
                    "; ".join(problems) if problems else "routes, series and denominators agree",
                )
            )
    return cases


def _twoplayer_cases(nmax: int) -> list[VerifyCase]:
    fixture = first_win_probabilities()
    cases = []
    for n in range(1, nmax + 1):
        problems = []
        result = two_player_result(STANDARD_RACE, n)
        wbar = result.first_win_prob
        system_value = winprob_exact(STANDARD_RACE, n)
        if wbar != system_value:
            problems.append(f"fitted W(1)={wbar} but the x=1 system gives {system_value}")
        squares_value = winprob_squares(STANDARD_RACE, n)
        if wbar != squares_value:
            problems.append(f"fitted W(1)={wbar} but the squared-series route gives {squares_value}")
        if n <= len(fixture) and wbar != fixture[n - 1]:
            problems.append("value disagrees with the shipped fixture")
        total = series_expand(result.total_gf, 21).coeffs
        wins = series_expand(result.win_gf, 10).coeffs
        loses = series_expand(result.lose_gf, 10).coeffs
        for k in range(1, 11):
            if total[2 * k - 1] != wins[k] or total[2 * k] != loses[k]:
                problems.append(f"total-turn parity breaks at round {k}")
                break
        cases.append(
            VerifyCase(
                f"twoplayer n={n}",
                not problems,
                "; ".join(problems) if problems else "series, fit, x=1 system and fixture agree",
            )
        )
    return cases


def _holonomy_cases(nmax: int) -> list[VerifyCase]:
    report = holonomy_evidence(STANDARD_RACE, nmax)
    problems = []
    if report.fixture_consistent is False:
        problems.append("computed values disagree with the shipped fixture")
    if report.recurrence_found:
        problems.append(f"unexpected recurrence of order {report.fit.order} found")
    detail = (
        f"no recurrence of order <= {report.max_order} fits "
        f"{report.sequence_length} values"
    )
    return [
        VerifyCase("holonomy hunt", not problems, "; ".join(problems) if problems else detail)
    ]


def verify_pipeline(
    family: str,
    nmax: int,
    ps: Optional[Sequence[Fraction]] = None,
    u: int = 2,
) -> VerifyReport:
    """Run one family's cross-checks (or all of them) up to target nmax.

    families: "pm1", "1mu" (uses u), "2m1", "twoplayer", "holonomy", "all".
    """
    if nmax < 1:
        raise ValueError("nmax must be >= 1")
    ps = tuple(ps) if ps else DEFAULT_PS
    cases: list[VerifyCase] = []
    if family == "pm1":
        cases = _single_family_cases("pm1", nmax, ps, 1)
    elif family == "1mu":
        cases = _single_family_cases("1mu", nmax, ps, u)
    elif family == "2m1":
        cases = _single_family_cases("2m1", nmax, ps, u)
    elif family == "twoplayer":
        cases = _twoplayer_cases(nmax)
    elif family == "holonomy":
        cases = _holonomy_cases(nmax)
    elif family == "all":
        cases.extend(_single_family_cases("pm1", nmax, ps, 1))
        cases.extend(_single_family_cases("1mu", nmax, ps, 2))
        cases.extend(_single_family_cases("1mu", nmax, ps, 3))
        cases.extend(_single_family_cases("2m1", nmax, ps, 1))
        cases.extend(_twoplayer_cases(nmax))
        cases.extend(_holonomy_cases(max(nmax, 5)))
    else:
        raise ValueError(f"unknown family {family!r}, expected one of {FAMILIES}")
    return VerifyReport(tuple(cases))
