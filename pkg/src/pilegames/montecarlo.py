"""Monte Carlo oracle for pile games.

Entirely independent of the exact engine: plays the games forward with
numpy and reports empirical statistics with standard errors, so the
generating-function results can be checked against simulated reality.

Randomness is pinned down exactly: a run is split into fixed-size blocks
of 65536 trials, block i uses the PCG64 generator spawned as child i of
numpy's SeedSequence(seed), and each move is sampled by drawing a uniform
integer below the common denominator of the step probabilities.  Reports
are therefore bit-identical across runs, machines, and block interleaving
for the same config.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

import numpy as np

from .single_player import GameSpec

BLOCK = 1 << 16


@dataclass(frozen=True, slots=True)
class SimConfig:
    """One simulation run: `starts` is (s,) for a single player or
    (s1, s2) for a race.  `max_turns` defaults to 64 * n**2, generous
    enough that truncation is astronomically unlikely at testing sizes."""

    spec: GameSpec
    n: int
    trials: int
    seed: int
    starts: tuple[int, ...] = (0,)
    max_turns: Optional[int] = None

    def __post_init__(self) -> None:
        if self.n < 1:
            raise ValueError("n must be >= 1")
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        if len(self.starts) not in (1, 2) or any(s < 0 for s in self.starts):
            raise ValueError("starts must be (s,) or (s1, s2), all >= 0")
        if self.max_turns is not None and self.max_turns < 1:
            raise ValueError("max_turns must be >= 1")

    @property
    def cap(self) -> int:
        return self.max_turns if self.max_turns is not None else 64 * self.n * self.n


@dataclass(frozen=True, slots=True)
class SimReport:
    """Empirical turn statistics; win_rate fields apply to races only.
    Truncated trials count toward the turn statistics at the cap value."""

    trials: int
    truncated: int
    mean_turns: float
    var_turns: float
    se_mean: float
    win_rate: Optional[float]
    se_win_rate: Optional[float]


def _sampler(spec: GameSpec) -> tuple[int, np.ndarray, np.ndarray]:
    denom = math.lcm(*(prob.denominator for _, prob in spec.choices))
    weights = [int(prob * denom) for _, prob in spec.choices]
    cum = np.cumsum(np.array(weights, dtype=np.int64))
    steps = np.array([step for step, _ in spec.choices], dtype=np.int64)
    return denom, cum, steps


def _block_sizes(trials: int) -> list[int]:
    full, rest = divmod(trials, BLOCK)
    return [BLOCK] * full + ([rest] if rest else [])


def _finish(trials: int, truncated: int, sum_t: int, sumsq_t: int, wins: Optional[int]) -> SimReport:
    mean = sum_t / trials
    var = (sumsq_t - sum_t * sum_t / trials) / (trials - 1) if trials > 1 else 0.0
    se = math.sqrt(max(var, 0.0) / trials)
    if wins is None:
        rate = se_rate = None
    else:
        rate = wins / trials
        se_rate = math.sqrt(rate * (1.0 - rate) / trials)
    return SimReport(trials, truncated, mean, var, se, rate, se_rate)


def simulate_single(config: SimConfig) -> SimReport:
    """Play the single-player game to absorption, `trials` times."""
    if len(config.starts) != 1:
        raise ValueError("single-player simulation needs starts = (s,)")
    s0 = config.starts[0]
    denom, cum, steps = _sampler(config.spec)
    cap = config.cap
    n = config.n
    seeds = np.random.SeedSequence(config.seed).spawn(len(_block_sizes(config.trials)))
    sum_t = sumsq_t = truncated = 0
    for size, seed in zip(_block_sizes(config.trials), seeds):
        gen = np.random.Generator(np.random.PCG64(seed))
        if s0 >= n:
            continue
        cur = np.full(size, s0, dtype=np.int64)
        t = 0
        while cur.size and t < cap:
            t += 1
            draws = gen.integers(0, denom, size=cur.size)
            cur = cur + steps[np.searchsorted(cum, draws, side="right")]
            done = cur >= n
            hits = int(done.sum())
            if hits:
                sum_t += hits * t
                sumsq_t += hits * t * t
                cur = cur[~done]
            np.maximum(cur, 0, out=cur)
        truncated += cur.size
        sum_t += cur.size * cap
        sumsq_t += cur.size * cap * cap
    return _finish(config.trials, truncated, sum_t, sumsq_t, None)


def simulate_two(config: SimConfig) -> SimReport:
    """Play the two-player race; turns are total turns, wins are first-mover
    wins.  Decided starts (a player at or past the target) finish at 0 turns."""
    if len(config.starts) != 2:
        raise ValueError("two-player simulation needs starts = (s1, s2)")
    s1, s2 = config.starts
    n = config.n
    if s1 >= n:
        return _finish(config.trials, 0, 0, 0, config.trials)
    if s2 >= n:
        return _finish(config.trials, 0, 0, 0, 0)
    denom, cum, steps = _sampler(config.spec)
    cap = config.cap
    seeds = np.random.SeedSequence(config.seed).spawn(len(_block_sizes(config.trials)))
    sum_t = sumsq_t = truncated = wins = 0
    for size, seed in zip(_block_sizes(config.trials), seeds):
        gen = np.random.Generator(np.random.PCG64(seed))
        a = np.full(size, s1, dtype=np.int64)
        b = np.full(size, s2, dtype=np.int64)
        t = 0
        while a.size and t < cap:
            t += 1
            draws = gen.integers(0, denom, size=a.size)
            a = a + steps[np.searchsorted(cum, draws, side="right")]
            done = a >= n
            hits = int(done.sum())
            if hits:
                wins += hits
                sum_t += hits * t
                sumsq_t += hits * t * t
                a, b = a[~done], b[~done]
            np.maximum(a, 0, out=a)
            if not a.size or t >= cap:
                break
            t += 1
            draws = gen.integers(0, denom, size=b.size)
            b = b + steps[np.searchsorted(cum, draws, side="right")]
            done = b >= n
            hits = int(done.sum())
            if hits:
                sum_t += hits * t
                sumsq_t += hits * t * t
                a, b = a[~done], b[~done]
            np.maximum(b, 0, out=b)
        truncated += a.size
        sum_t += a.size * cap
        sumsq_t += a.size * cap * cap
    return _finish(config.trials, truncated, sum_t, sumsq_t, wins)
