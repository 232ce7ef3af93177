"""Command-line client for the pile-game service.

The CLI never computes anything itself: every verb posts one request,
by default to an in-process copy of the service (no server needed), or
to a running instance via --server.  Results go to standard output as
JSON (or aligned text with --format pretty); progress notes and errors
go to the error stream.  Exit codes: 0 success, 1 usage or request
error, 2 verification mismatch.
"""

from __future__ import annotations

import argparse
import asyncio
import json
import os
import sys
from typing import Optional

import httpx

from .algebra import Poly, RatFunc

USAGE_ERROR = 1
MISMATCH_ERROR = 2


class _Parser(argparse.ArgumentParser):
    """argparse exits with 2 on bad usage; this CLI reserves 2 for
    verification mismatches, so usage errors exit 1 instead."""

    def error(self, message: str):
        self.print_usage(sys.stderr)
        self.exit(USAGE_ERROR, f"{self.prog}: error: {message}\n")


def _note(message: str) -> None:
    print(message, file=sys.stderr, flush=True)


def _post(server: Optional[str], path: str, payload: dict) -> tuple[int, dict]:
    if server:
        with httpx.Client(base_url=server, timeout=None) as client:
            resp = client.post(path, json=payload)
            return resp.status_code, resp.json()

    async def inprocess():
        from .service import app

        transport = httpx.ASGITransport(app=app)
        async with httpx.AsyncClient(
            transport=transport, base_url="http://pilegames.local", timeout=None
        ) as client:
            resp = await client.post(path, json=payload)
            return resp.status_code, resp.json()

    return asyncio.run(inprocess())


def _ratfunc_text(model: dict) -> str:
    return str(RatFunc(Poly.of(model["num"]), Poly.of(model["den"])))


def _pretty(path: str, data: dict) -> str:
    lines: list[str] = []
    if path == "/gf":
        lines.append(f"target n = {data['n']}, game {data['spec']}")
        if "gf" in data:
            lines.append(f"  G[s={data['s']}] = {_ratfunc_text(data['gf'])}")
        else:
            for s in sorted(data["gfs"], key=int):
                lines.append(f"  G[s={s}] = {_ratfunc_text(data['gfs'][s])}")
    elif path == "/moments":
        lines.append(f"turn-count moments for n={data['n']}, s={data['s']}")
        for r in range(data["r_max"] + 1):
            lines.append(
                f"  r={r}: E[X^r] = {data['straight'][r]}, central = {data['central'][r]}"
            )
    elif path == "/twoplayer":
        lines.append(f"race to n={data['n']} from ({data['s1']}, {data['s2']})")
        lines.append(f"  W = {_ratfunc_text(data['W'])}")
        lines.append(f"  L = {_ratfunc_text(data['L'])}")
        lines.append(f"  T = {_ratfunc_text(data['T'])}")
        lines.append(f"  first-mover win probability = {data['wbar']}")
    elif path == "/guess":
        if not data["found"]:
            lines.append("no recurrence within the order bound")
        else:
            rec = data["rec"]
            lines.append(
                f"order {rec['order']}, coeffs {rec['coeffs']}, "
                f"initials {rec['initials']}, offset {rec['offset']}"
            )
            lines.append(f"  GF = {_ratfunc_text(data['gf'])}")
    elif path == "/denom":
        lines.append(f"denominator for {data['family']} p={data['p']} n={data['n']}:")
        lines.append(f"  {Poly.of(data['coeffs'])}")
    elif path == "/verify":
        for case in data["cases"]:
            lines.append(f"{'PASS' if case['ok'] else 'FAIL'}  {case['name']}: {case['detail']}")
        lines.append("all checks passed" if data["ok"] else "SOME CHECKS FAILED")
    else:
        return json.dumps(data, indent=2)
    return "\n".join(lines)


def build_parser() -> _Parser:
    parser = _Parser(prog="pilegames", description=__doc__)
    parser.add_argument("--server", help="base URL of a running service (default: in-process)")
    parser.add_argument(
        "--format",
        choices=("json", "pretty"),
        default=os.environ.get("PILEGAMES_FORMAT", "json"),
        help="output format (env PILEGAMES_FORMAT)",
    )
    sub = parser.add_subparsers(dest="verb", required=True, parser_class=_Parser)

    def add(name: str, help_text: str) -> argparse.ArgumentParser:
        p = sub.add_parser(name, help=help_text)
        # accept the global flags after the verb as well
        p.add_argument("--server", default=argparse.SUPPRESS, help=argparse.SUPPRESS)
        p.add_argument(
            "--format",
            choices=("json", "pretty"),
            default=argparse.SUPPRESS,
            help=argparse.SUPPRESS,
        )
        return p

    p = add("gf", "turn-count generating functions for one target")
    p.add_argument("--spec", required=True, help="game text, e.g. '1:1/2,-1:1/2'")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--s", type=int, default=None, help="single start instead of the whole table")
    p.add_argument("--method", choices=("solve", "recursive"), default="solve")

    p = add("moments", "exact straight and central turn-count moments")
    p.add_argument("--spec", required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--s", type=int, default=0)
    p.add_argument("--rmax", type=int, default=3)

    p = add("pathcount", "number of ways to end exactly at turn k")
    p.add_argument("--steps", required=True, help="comma-separated steps, e.g. '1,-1'")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--s", type=int, default=0)

    p = add("theorem6", "closed-form end count for unit steps, if inside the formula region")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--t", type=int, required=True)
    p.add_argument("--s", type=int, default=0)

    p = add("denom", "common-denominator polynomial from the family recurrence")
    p.add_argument("--family", choices=("pm1", "1mu", "2m1"), required=True)
    p.add_argument("--p", required=True, help="up-step probability, exact, e.g. 1/2")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--u", type=int, default=1)

    p = add("winprob", "exact first-mover win probability")
    p.add_argument("--spec", required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--method", choices=("solve", "gf", "squares"), default="solve")

    p = add("twoplayer", "win/lose/total generating functions for the race")
    p.add_argument("--spec", required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--s1", type=int, default=0)
    p.add_argument("--s2", type=int, default=0)

    p = add("endgame", "moments of the race's endgame clocks")
    p.add_argument("--spec", required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--rmax", type=int, default=10)

    p = add("guess", "fit a minimal linear recurrence to series terms")
    p.add_argument("--terms", required=True, help="comma-separated rationals")
    p.add_argument("--max-order", type=int, required=True)

    p = add("simulate", "Monte Carlo cross-check with pinned RNG")
    p.add_argument("--spec", required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--mode", choices=("single", "two"), default="single")
    p.add_argument("--trials", type=int, default=100_000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--s", type=int, default=0)
    p.add_argument("--s1", type=int, default=0)
    p.add_argument("--s2", type=int, default=0)
    p.add_argument("--max-turns", type=int, default=None)
    p.add_argument("--target-mean", default=None, help="exact value to compare against")
    p.add_argument("--target-win-rate", default=None)

    p = add("verify", "run a family's independent-route cross-checks")
    p.add_argument("--family", choices=("pm1", "1mu", "2m1", "twoplayer", "holonomy", "all"), default="all")
    p.add_argument("--nmax", type=int, default=4)
    p.add_argument("--u", type=int, default=2)
    p.add_argument("--p", action="append", dest="ps", help="probability to test (repeatable)")

    p = add("serve", "run the service with uvicorn")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)

    return parser


def _payload(args: argparse.Namespace) -> tuple[str, dict]:
    verb = args.verb
    if verb == "gf":
        return "/gf", {"spec": args.spec, "n": args.n, "s": args.s, "method": args.method}
    if verb == "moments":
        return "/moments", {"spec": args.spec, "n": args.n, "s": args.s, "r_max": args.rmax}
    if verb == "pathcount":
        steps = [int(v) for v in args.steps.split(",")]
        return "/pathcount", {"steps": steps, "n": args.n, "k": args.k, "s": args.s}
    if verb == "theorem6":
        return "/theorem6", {"n": args.n, "t": args.t, "s": args.s}
    if verb == "denom":
        return "/denom", {"family": args.family, "p": args.p, "n": args.n, "u": args.u}
    if verb == "winprob":
        return "/winprob", {"spec": args.spec, "n": args.n, "method": args.method}
    if verb == "twoplayer":
        return "/twoplayer", {"spec": args.spec, "n": args.n, "s1": args.s1, "s2": args.s2}
    if verb == "endgame":
        return "/endgame", {"spec": args.spec, "n": args.n, "r_max": args.rmax}
    if verb == "guess":
        return "/guess", {"terms": args.terms.split(","), "max_order": args.max_order}
    if verb == "simulate":
        return "/simulate", {
            "spec": args.spec,
            "n": args.n,
            "mode": args.mode,
            "trials": args.trials,
            "seed": args.seed,
            "s": args.s,
            "s1": args.s1,
            "s2": args.s2,
            "max_turns": args.max_turns,
            "target_mean": args.target_mean,
            "target_win_rate": args.target_win_rate,
        }
    if verb == "verify":
        return "/verify", {"family": args.family, "nmax": args.nmax, "u": args.u, "ps": args.ps}
    raise AssertionError(f"unhandled verb {verb}")


def main(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)

    if args.verb == "serve":
        import uvicorn

        from .service import app

        uvicorn.run(app, host=args.host, port=args.port)
        return 0

    try:
        path, payload = _payload(args)
    except ValueError as exc:
        _note(f"pilegames: error: {exc}")
        return USAGE_ERROR

    if args.verb in ("twoplayer", "endgame", "verify", "simulate"):
        _note(f"working: {args.verb} ...")
    try:
        status, data = _post(args.server, path, payload)
    except httpx.HTTPError as exc:
        _note(f"pilegames: request failed: {exc}")
        return USAGE_ERROR

    if status != 200:
        detail = data.get("detail", data) if isinstance(data, dict) else data
        _note(f"pilegames: error: {detail}")
        return USAGE_ERROR

    if args.format == "pretty":
        print(_pretty(path, data))
    else:
        print(json.dumps(data, indent=2))

    if args.verb == "verify" and not data.get("ok", False):
        return MISMATCH_ERROR
    if args.verb == "simulate":
        for check in (data.get("mean_check"), data.get("win_rate_check")):
            if check and not check.get("within_3se", True):
                return MISMATCH_ERROR
    return 0


if __name__ == "__main__":
    sys.exit(main())
