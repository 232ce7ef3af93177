"""Exact statistics for pile games with a floor at zero and an absorbing
target: generating functions, moments, path counts, two-player races,
recurrence guessing, and a Monte Carlo cross-check."""

from .algebra import (
    ONE,
    PoleError,
    Poly,
    RatFunc,
    Rational,
    Series,
    X,
    ZERO,
    format_rational,
    parse_rational,
    poly_gcd,
    poly_lcm,
    series_expand,
    xdx,
)
from .cfinite import (
    CFiniteRec,
    InsufficientDataError,
    ShiftOpPoly,
    apply_shift_annihilator,
    guess_recurrence,
    hadamard_guess,
    partial_sum_complement,
    rec_to_ratfunc,
)
from .linear import SingularMatrixError, linear_solve, solve_rational, solve_ratfunc
from .montecarlo import SimConfig, SimReport, simulate_single, simulate_two
from .single_player import (
    AnnihilatorReport,
    ClosedFormReport,
    GameSpec,
    GFTable,
    MomentReport,
    PQPair,
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
    moments_of_gf,
    path_count,
    solve_gf,
    split_gf_2m1,
)
from .two_player import (
    EndgameMoments,
    GuessBoundError,
    HolonomyReport,
    STANDARD_RACE,
    TwoPlayerResult,
    endgame_moments,
    guess_WL,
    holonomy_evidence,
    lose_series,
    make_T,
    two_player_result,
    win_series,
    winprob_exact,
    winprob_squares,
)
from .verify import VerifyCase, VerifyReport, verify_pipeline

__version__ = "0.1.0"
