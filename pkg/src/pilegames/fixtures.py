"""Shipped exact fixture data, loaded as Fractions."""

from __future__ import annotations

import json
from fractions import Fraction
from functools import lru_cache
from importlib.resources import files


def _load(name: str) -> dict:
    return json.loads(files("pilegames.data").joinpath(name).read_text())


@lru_cache(maxsize=None)
def first_win_probabilities() -> tuple[Fraction, ...]:
    """First-mover win probabilities for the symmetric unit-step race,
    targets 1..15 (index 0 is target 1)."""
    raw = _load("first_win_probabilities.json")
    return tuple(Fraction(v) for v in raw["values"])


@lru_cache(maxsize=None)
def endgame_moments_target1() -> dict[str, tuple[Fraction, ...]]:
    """Exact endgame moment sequences for the symmetric race to 1."""
    raw = _load("endgame_moments_target1.json")
    return {
        key: tuple(Fraction(v) for v in raw[key])
        for key in (
            "winner_rounds_straight",
            "winner_rounds_central",
            "total_turns_straight",
            "total_turns_central",
        )
    }
