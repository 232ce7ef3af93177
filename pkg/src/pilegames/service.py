"""HTTP service exposing the exact engine.

Every endpoint is a POST with a JSON body and wraps one core operation;
the service holds no state, so responses are pure functions of requests.
Rationals travel as strings ("a" or "a/b"), polynomials as ascending
arrays of rational strings, and rational functions as {"num": [...],
"den": [...]}.  Domain errors (bad game text, out-of-range indices,
insufficient data) come back as HTTP 400 with a message.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Literal, Optional

from fastapi import FastAPI, HTTPException
from pydantic import BaseModel, Field

from . import montecarlo
from .algebra import Poly, RatFunc, parse_rational
from .cfinite import guess_recurrence, rec_to_ratfunc
from .single_player import (
    GameSpec,
    closed_form_path_count,
    denom_recurrence,
    gf_recursive_1mu,
    gf_recursive_2m1,
    moments,
    path_count,
    solve_gf,
)
from .two_player import endgame_moments, two_player_result, winprob_exact, winprob_squares
from .verify import FAMILIES, verify_pipeline


class RatFuncModel(BaseModel):
    num: list[str]
    den: list[str]


def _poly_out(p: Poly) -> list[str]:
    return [str(c) for c in p.coeffs]


def _ratfunc_out(f: RatFunc) -> RatFuncModel:
    return RatFuncModel(num=_poly_out(f.num), den=_poly_out(f.den))


def _spec_in(text: str) -> GameSpec:
    try:
        return GameSpec.parse(text)
    except ValueError as exc:
        raise HTTPException(status_code=400, detail=f"bad game spec: {exc}")


def _rational_in(text: str, what: str) -> Fraction:
    try:
        return parse_rational(text)
    except ValueError as exc:
        raise HTTPException(status_code=400, detail=f"bad {what}: {exc}")


def _domain(callable_):
    try:
        return callable_()
    except (ValueError, ArithmeticError) as exc:
        raise HTTPException(status_code=400, detail=str(exc))


class GfRequest(BaseModel):
    spec: str
    n: int = Field(ge=0)
    s: Optional[int] = None
    method: Literal["solve", "recursive"] = "solve"


class GfTableResponse(BaseModel):
    n: int
    spec: str
    gfs: dict[str, RatFuncModel]


class GfEntryResponse(BaseModel):
    n: int
    s: int
    spec: str
    gf: RatFuncModel


class MomentsRequest(BaseModel):
    spec: str
    n: int = Field(ge=0)
    s: int = Field(ge=0)
    r_max: int = Field(default=3, ge=0, le=64)


class MomentsResponse(BaseModel):
    n: int
    s: int
    r_max: int
    straight: list[str]
    central: list[str]


class PathCountRequest(BaseModel):
    steps: list[int]
    n: int = Field(ge=0)
    k: int = Field(ge=0)
    s: int = Field(default=0, ge=0)


class PathCountResponse(BaseModel):
    count: int


class ClosedCountRequest(BaseModel):
    n: int = Field(ge=0)
    t: int
    s: int = Field(default=0, ge=0)


class ClosedCountResponse(BaseModel):
    count: Optional[int]
    inside_region: bool


class DenomRequest(BaseModel):
    family: Literal["pm1", "1mu", "2m1"]
    p: str
    n: int = Field(ge=0)
    u: int = Field(default=1, ge=1)


class DenomResponse(BaseModel):
    family: str
    p: str
    n: int
    u: int
    coeffs: list[str]


class WinprobRequest(BaseModel):
    spec: str
    n: int = Field(ge=1)
    method: Literal["solve", "gf", "squares"] = "solve"


class WinprobResponse(BaseModel):
    n: int
    method: str
    value: str


class TwoPlayerRequest(BaseModel):
    spec: str
    n: int = Field(ge=0)
    s1: int = Field(default=0, ge=0)
    s2: int = Field(default=0, ge=0)


class TwoPlayerResponse(BaseModel):
    n: int
    s1: int
    s2: int
    W: RatFuncModel
    L: RatFuncModel
    T: RatFuncModel
    wbar: str
    denominator_degree_bound: int


class EndgameRequest(BaseModel):
    spec: str
    n: int = Field(ge=1)
    r_max: int = Field(default=10, ge=0, le=64)


class EndgameResponse(BaseModel):
    n: int
    r_max: int
    first_win_prob: str
    winner_rounds_straight: list[str]
    winner_rounds_central: list[str]
    total_turns_straight: list[str]
    total_turns_central: list[str]


class GuessRequest(BaseModel):
    terms: list[str]
    max_order: int = Field(ge=0)


class RecModel(BaseModel):
    order: int
    coeffs: list[str]
    initials: list[str]
    offset: int


class GuessResponse(BaseModel):
    found: bool
    rec: Optional[RecModel]
    gf: Optional[RatFuncModel]


class SimulateRequest(BaseModel):
    spec: str
    n: int = Field(ge=1)
    mode: Literal["single", "two"] = "single"
    trials: int = Field(default=100_000, ge=1)
    seed: int = 0
    s: int = Field(default=0, ge=0)
    s1: int = Field(default=0, ge=0)
    s2: int = Field(default=0, ge=0)
    max_turns: Optional[int] = Field(default=None, ge=1)
    target_mean: Optional[str] = None
    target_win_rate: Optional[str] = None


class TargetCheck(BaseModel):
    target: str
    z: float
    within_3se: bool


class SimulateResponse(BaseModel):
    mode: str
    trials: int
    truncated: int
    seed: int
    mean_turns: float
    var_turns: float
    se_mean: float
    win_rate: Optional[float]
    se_win_rate: Optional[float]
    mean_check: Optional[TargetCheck]
    win_rate_check: Optional[TargetCheck]


class VerifyRequest(BaseModel):
    family: str = "all"
    nmax: int = Field(default=4, ge=1)
    u: int = Field(default=2, ge=1)
    ps: Optional[list[str]] = None


class VerifyCaseModel(BaseModel):
    name: str
    ok: bool
    detail: str


class VerifyResponse(BaseModel):
    ok: bool
    cases: list[VerifyCaseModel]


def _target_check(target: Fraction, value: float, se: float) -> TargetCheck:
    z = (value - float(target)) / se if se > 0 else (0.0 if value == float(target) else float("inf"))
    return TargetCheck(target=str(target), z=z, within_3se=abs(z) <= 3.0)


def create_app() -> FastAPI:
    app = FastAPI(
        title="pilegames",
        description="Exact pile-game statistics: generating functions, moments, "
        "path counts, two-player races, and a Monte Carlo cross-check.",
    )

    @app.get("/health")
    def health() -> dict:
        return {"status": "ok"}

    @app.post("/gf")
    def gf(req: GfRequest):
        spec = _spec_in(req.spec)

        def build():
            if req.method == "recursive":
                ups = sorted(step for step in spec.steps if step > 0)
                downs = sorted(-step for step in spec.steps if step < 0)
                if ups == [1] and len(downs) == 1 and spec == GameSpec.up_down(1, downs[0], dict(spec.choices)[1]):
                    return gf_recursive_1mu(dict(spec.choices)[1], downs[0], req.n)
                if ups == [2] and downs == [1] and spec == GameSpec.up_down(2, 1, dict(spec.choices)[2]):
                    return gf_recursive_2m1(dict(spec.choices)[2], req.n)
                raise ValueError("no recursive construction for this game; use method=solve")
            return solve_gf(spec, req.n)

        table = _domain(build)
        if req.s is not None:
            if req.s < 0:
                raise HTTPException(status_code=400, detail="s must be >= 0")
            return GfEntryResponse(
                n=req.n, s=req.s, spec=spec.format(), gf=_ratfunc_out(table.gf(req.s))
            )
        return GfTableResponse(
            n=req.n,
            spec=spec.format(),
            gfs={str(s): _ratfunc_out(table.gf(s)) for s in range(req.n + 1)},
        )

    @app.post("/moments")
    def moments_ep(req: MomentsRequest) -> MomentsResponse:
        spec = _spec_in(req.spec)
        report = _domain(lambda: moments(spec, req.n, req.s, req.r_max))
        return MomentsResponse(
            n=req.n,
            s=req.s,
            r_max=req.r_max,
            straight=[str(v) for v in report.straight],
            central=[str(v) for v in report.central],
        )

    @app.post("/pathcount")
    def pathcount(req: PathCountRequest) -> PathCountResponse:
        return PathCountResponse(
            count=_domain(lambda: path_count(req.steps, req.n, req.k, req.s))
        )

    @app.post("/theorem6")
    def closed_count(req: ClosedCountRequest) -> ClosedCountResponse:
        count = _domain(lambda: closed_form_path_count(req.n, req.t, req.s))
        return ClosedCountResponse(count=count, inside_region=count is not None)

    @app.post("/denom")
    def denom(req: DenomRequest) -> DenomResponse:
        p = _rational_in(req.p, "probability p")
        poly = _domain(lambda: denom_recurrence(req.family, p, req.n, u=req.u))
        return DenomResponse(
            family=req.family, p=str(p), n=req.n, u=req.u, coeffs=_poly_out(poly)
        )

    @app.post("/winprob")
    def winprob(req: WinprobRequest) -> WinprobResponse:
        spec = _spec_in(req.spec)

        def build() -> Fraction:
            if req.method == "solve":
                return winprob_exact(spec, req.n)
            if req.method == "squares":
                return winprob_squares(spec, req.n)
            return two_player_result(spec, req.n).first_win_prob

        return WinprobResponse(n=req.n, method=req.method, value=str(_domain(build)))

    @app.post("/twoplayer")
    def twoplayer(req: TwoPlayerRequest) -> TwoPlayerResponse:
        spec = _spec_in(req.spec)
        result = _domain(lambda: two_player_result(spec, req.n, req.s1, req.s2))
        return TwoPlayerResponse(
            n=result.n,
            s1=result.s1,
            s2=result.s2,
            W=_ratfunc_out(result.win_gf),
            L=_ratfunc_out(result.lose_gf),
            T=_ratfunc_out(result.total_gf),
            wbar=str(result.first_win_prob),
            denominator_degree_bound=result.denominator_degree_bound,
        )

    @app.post("/endgame")
    def endgame(req: EndgameRequest) -> EndgameResponse:
        spec = _spec_in(req.spec)
        report = _domain(lambda: endgame_moments(spec, req.n, req.r_max))
        return EndgameResponse(
            n=report.n,
            r_max=report.r_max,
            first_win_prob=str(report.first_win_prob),
            winner_rounds_straight=[str(v) for v in report.winner_rounds_straight],
            winner_rounds_central=[str(v) for v in report.winner_rounds_central],
            total_turns_straight=[str(v) for v in report.total_turns_straight],
            total_turns_central=[str(v) for v in report.total_turns_central],
        )

    @app.post("/guess")
    def guess(req: GuessRequest) -> GuessResponse:
        terms = [_rational_in(t, "series term") for t in req.terms]
        rec = _domain(lambda: guess_recurrence(terms, req.max_order))
        if rec is None:
            return GuessResponse(found=False, rec=None, gf=None)
        return GuessResponse(
            found=True,
            rec=RecModel(
                order=rec.order,
                coeffs=[str(c) for c in rec.coeffs],
                initials=[str(v) for v in rec.initials],
                offset=rec.offset,
            ),
            gf=_ratfunc_out(rec_to_ratfunc(rec)),
        )

    @app.post("/simulate")
    def simulate(req: SimulateRequest) -> SimulateResponse:
        spec = _spec_in(req.spec)
        starts = (req.s,) if req.mode == "single" else (req.s1, req.s2)
        config = _domain(
            lambda: montecarlo.SimConfig(
                spec, req.n, req.trials, req.seed, starts, req.max_turns
            )
        )
        runner = montecarlo.simulate_single if req.mode == "single" else montecarlo.simulate_two
        report = _domain(lambda: runner(config))
        mean_check = None
        if req.target_mean is not None:
            mean_check = _target_check(
                _rational_in(req.target_mean, "target mean"), report.mean_turns, report.se_mean
            )
        win_check = None
        if req.target_win_rate is not None:
            if report.win_rate is None:
                raise HTTPException(status_code=400, detail="win-rate target needs mode=two")
            win_check = _target_check(
                _rational_in(req.target_win_rate, "target win rate"),
                report.win_rate,
                report.se_win_rate,
            )
        return SimulateResponse(
            mode=req.mode,
            trials=report.trials,
            truncated=report.truncated,
            seed=req.seed,
            mean_turns=report.mean_turns,
            var_turns=report.var_turns,
            se_mean=report.se_mean,
            win_rate=report.win_rate,
            se_win_rate=report.se_win_rate,
            mean_check=mean_check,
            win_rate_check=win_check,
        )

    @app.post("/verify")
    def verify(req: VerifyRequest) -> VerifyResponse:
        if req.family not in FAMILIES:
            raise HTTPException(
                status_code=400, detail=f"unknown family {req.family!r}, expected one of {FAMILIES}"
            )
        ps = [_rational_in(p, "probability") for p in req.ps] if req.ps else None
        report = _domain(lambda: verify_pipeline(req.family, req.nmax, ps, req.u))
        return VerifyResponse(
            ok=report.ok,
            cases=[VerifyCaseModel(name=c.name, ok=c.ok, detail=c.detail) for c in report.cases],
        )

    return app


app = create_app()
