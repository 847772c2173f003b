"""Synchronous two-color majority dynamics and its color-1-biased variant.

Each day every vertex simultaneously looks at its neighbours' colors on the
previous day:

* standard rule: take color 1 if d1 > d2, color 2 if d2 > d1, keep the
  current color on a tie (isolated vertices always tie);
* biased rule: take color 1 if d1 >= d2, color 2 if d1 <= d2 - 2, keep the
  current color only at d1 = d2 - 1.

Synchronous runs are eventually periodic with period at most 2, so a run
terminates on unanimity, on a repeat of the state one or two days back, or
at a day cap.
"""

from __future__ import annotations

import enum
import json
import math
from dataclasses import dataclass
from typing import Optional, TextIO, Union

import numpy as np

from .graphs import ColoredGraph, popcount_rows

__all__ = [
    "UpdateRule",
    "Unanimity",
    "TwoCycle",
    "CapReached",
    "DynamicsTrace",
    "step",
    "run",
    "default_cap",
]


class UpdateRule(enum.Enum):
    STANDARD = "standard"
    BIASED = "biased"


@dataclass(frozen=True)
class Unanimity:
    winner: int
    day: int


@dataclass(frozen=True)
class TwoCycle:
    """State repeated the state one or two days earlier without unanimity.

    entered_day is the first day of the repeating pair (period-1 fixed
    points are reported here too, with the repeat one day back).
    """

    entered_day: int
    period: int = 2


@dataclass(frozen=True)
class CapReached:
    cap: int


Termination = Union[Unanimity, TwoCycle, CapReached]


@dataclass
class DynamicsTrace:
    n: int
    counts: list[tuple[int, int]]  # (day, c1)
    termination: Termination

    def c1(self, day: int) -> int:
        return self.counts[day][1]

    @property
    def days_run(self) -> int:
        return self.counts[-1][0]

    def write_csv(self, fh: TextIO) -> None:
        """CSV rows (day, c1, c2) followed by a JSON footer comment."""
        fh.write("day,c1,c2\n")
        for day, c1 in self.counts:
            fh.write(f"{day},{c1},{self.n - c1}\n")
        fh.write("# " + json.dumps(self.termination_record(), sort_keys=True) + "\n")

    def termination_record(self) -> dict:
        t = self.termination
        if isinstance(t, Unanimity):
            return {"kind": "unanimity", "winner": t.winner, "day": t.day}
        if isinstance(t, TwoCycle):
            return {"kind": "two_cycle", "entered_day": t.entered_day, "period": t.period}
        return {"kind": "cap_reached", "cap": t.cap}


def _new_color1(g: ColoredGraph, rule: UpdateRule) -> np.ndarray:
    d1 = popcount_rows(g.adj & g.color1_words[None, :])
    deg = g.degrees
    cur1 = g.colors == 1
    if rule is UpdateRule.STANDARD:
        return (2 * d1 > deg) | ((2 * d1 == deg) & cur1)
    # biased: d1 >= d2 wins for color 1; only d1 == d2 - 1 keeps the color
    return (2 * d1 >= deg) | ((2 * d1 == deg - 1) & cur1)


def step(g: ColoredGraph, rule: UpdateRule = UpdateRule.STANDARD) -> ColoredGraph:
    """One synchronous day.  The input is untouched; adjacency is shared."""
    new1 = _new_color1(g, rule)
    return g.with_colors(np.where(new1, 1, 2).astype(np.int8))


def run(g: ColoredGraph, rule: UpdateRule = UpdateRule.STANDARD,
        cap: int = 1000) -> DynamicsTrace:
    """Iterate days until unanimity, a period <= 2 repeat, or the cap."""
    if cap < 1:
        raise ValueError("cap must be at least 1")
    n = g.n
    counts = []
    cur = g
    cur_mask = g.color1_words.copy()
    prev_mask: Optional[np.ndarray] = None
    prev2_mask: Optional[np.ndarray] = None
    c1 = int((g.colors == 1).sum())
    counts.append((0, c1))
    if c1 in (0, n):
        return DynamicsTrace(n, counts, Unanimity(1 if c1 == n else 2, 0))
    for day in range(1, cap + 1):
        cur = step(cur, rule)
        new_mask = cur.color1_words
        c1 = int((cur.colors == 1).sum())
        counts.append((day, c1))
        if c1 in (0, n):
            return DynamicsTrace(n, counts, Unanimity(1 if c1 == n else 2, day))
        if np.array_equal(new_mask, cur_mask):
            return DynamicsTrace(n, counts, TwoCycle(entered_day=day - 1, period=1))
        if prev_mask is not None and np.array_equal(new_mask, prev_mask):
            return DynamicsTrace(n, counts, TwoCycle(entered_day=day - 2, period=2))
        prev2_mask, prev_mask, cur_mask = prev_mask, cur_mask, new_mask
    return DynamicsTrace(n, counts, CapReached(cap))


def default_cap(n: int, p: float, c: float = 10.0, c0: int = 10) -> int:
    """Safety cap of ceil(c * log n / log(np)) + c0 days; requires np > 1."""
    if n * p <= 1.0:
        raise ValueError(f"default_cap needs np > 1, got np={n * p}")
    return math.ceil(c * math.log(n) / math.log(n * p)) + c0
