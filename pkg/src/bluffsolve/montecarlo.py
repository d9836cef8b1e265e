"""Seeded Monte Carlo estimation and an exact brute-force oracle for finite decks.

The simulator is chunked over counter-based Philox streams, so an estimate is
bit-identical for a fixed (seed, chunk_size) no matter how chunks would be
scheduled. Each simulated round consumes exactly four uniforms per hand
(card, card, bet draw, bet draw); the ``mirrored`` flag swaps the seat columns
of that stream, which replays the identical physical hands with the players'
roles exchanged and therefore negates every payoff exactly.

The brute-force oracle sums over every card pair and bet combination of a
discrete deck in exact rational arithmetic, then conditions on the hand
settling: E = E[payoff on settled deals] / (1 - P(replay)).
"""

from __future__ import annotations

import math
from bisect import bisect_right
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .engine import MAX_CONSECUTIVE_REPLAYS, GameConfig
from .strategy import Strategy

DEFAULT_CHUNK_SIZE = 1 << 18

#: Largest deck the exact oracle will enumerate.
MAX_ENUMERATED_DECK = 10_000


@dataclass(frozen=True)
class MCEstimate:
    """Sample mean of player 1's net payoff over settled hands.

    ``std_error`` is the sample standard deviation over sqrt(hands) (0.0 when
    hands == 1, where the sample deviation is undefined). ``replay_rate`` is
    the fraction of deals that had to be replayed.
    """

    mean: float
    std_error: float
    hands: int
    seed: int
    replay_rate: float
    chunk_size: int


@dataclass(frozen=True)
class ExactDiscreteValue:
    """Exact expected settled payoff and replay probability of a finite deck."""

    value: Fraction
    replay_probability: Fraction

    @property
    def value_float(self) -> float:
        return float(self.value)

    @property
    def replay_probability_float(self) -> float:
        return float(self.replay_probability)


def _strategy_tables(s: Strategy) -> tuple[np.ndarray, np.ndarray]:
    return np.asarray(s.breakpoints), np.asarray(s.high_prob)


def simulate(
    cfg: GameConfig,
    s1: Strategy,
    s2: Strategy,
    hands: int,
    seed: int,
    chunk_size: int = DEFAULT_CHUNK_SIZE,
    mirrored: bool = False,
) -> MCEstimate:
    """Estimate player 1's expected payoff from ``hands`` settled hands."""
    if hands < 1:
        raise ValueError(f"need at least one hand, got {hands}")
    if chunk_size < 1:
        raise ValueError(f"chunk size must be positive, got {chunk_size}")
    a, b = float(cfg.high_bet), float(cfg.low_bet)
    bp1, pr1 = _strategy_tables(s1)
    bp2, pr2 = _strategy_tables(s2)
    deck = cfg.deck_size

    total = 0.0
    total_sq = 0.0
    replays = 0
    done = 0
    chunk_index = 0
    while done < hands:
        n = min(chunk_size, hands - done)
        rng = np.random.Generator(np.random.Philox(key=seed % (1 << 64)).jumped(chunk_index))
        payoff = np.empty(n)
        pending = np.arange(n)
        rounds = 0
        while pending.size:
            rounds += 1
            if rounds > MAX_CONSECUTIVE_REPLAYS:
                raise RuntimeError(
                    f"hands failed to settle within {MAX_CONSECUTIVE_REPLAYS} replays"
                )
            u = rng.random((pending.size, 4))
            if mirrored:
                u = u[:, [1, 0, 3, 2]]
            if deck is None:
                c1, c2 = u[:, 0], u[:, 1]
                tie = c1 == c2
            else:
                i1 = np.minimum((u[:, 0] * deck).astype(np.int64), deck - 1)
                i2 = np.minimum((u[:, 1] * deck).astype(np.int64), deck - 1)
                tie = i1 == i2
                c1 = i1 / (deck - 1)
                c2 = i2 / (deck - 1)
            h1 = pr1[np.searchsorted(bp1, c1, side="right")]
            h2 = pr2[np.searchsorted(bp2, c2, side="right")]
            high1 = u[:, 2] < h1
            high2 = u[:, 3] < h2
            sign = np.sign(c1 - c2)
            pay = np.where(
                high1 == high2,
                np.where(high1, a, b) * sign,
                np.where(high1, b, -b),
            )
            replay = (high1 == high2) & tie
            settled = ~replay
            payoff[pending[settled]] = pay[settled]
            replays += int(replay.sum())
            pending = pending[replay]
        total += float(payoff.sum())
        total_sq += float((payoff * payoff).sum())
        done += n
        chunk_index += 1

    mean = total / hands
    if hands > 1:
        variance = max((total_sq - hands * mean * mean) / (hands - 1), 0.0)
        std_error = math.sqrt(variance / hands)
    else:
        std_error = 0.0
    return MCEstimate(
        mean=mean,
        std_error=std_error,
        hands=hands,
        seed=seed,
        replay_rate=replays / (hands + replays),
        chunk_size=chunk_size,
    )


def _exact_piece_values(s: Strategy, grid: list[Fraction]) -> list[Fraction]:
    # Exact comparisons: grid points are rationals, breakpoints exact floats.
    return [Fraction(s.high_prob[bisect_right(s.breakpoints, x)]) for x in grid]


def _sign_weighted_sum(xs: list[Fraction], ys: list[Fraction]) -> Fraction:
    total = sum(ys, Fraction(0))
    running = Fraction(0)
    acc = Fraction(0)
    for x, y in zip(xs, ys):
        above = total - running - y
        acc += x * (running - above)
        running += y
    return acc


def brute_force_discrete(cfg: GameConfig, s1: Strategy, s2: Strategy) -> ExactDiscreteValue:
    """Exact expected payoff over a discrete deck, by full enumeration.

    Every one of the M^2 equally likely card pairs contributes its four bet
    combinations with exact rational probabilities; pairwise card-comparison
    terms are accumulated with prefix sums so decks up to M = 10^4 stay fast.
    """
    m = cfg.deck_size
    if m is None:
        raise ValueError("brute force needs a discrete deck; use analytic.expected_payoff")
    if m > MAX_ENUMERATED_DECK:
        raise ValueError(f"deck of {m} cards exceeds the enumeration limit {MAX_ENUMERATED_DECK}")
    a, b = cfg.high_bet, cfg.low_bet
    grid = [Fraction(i, m - 1) for i in range(m)]
    p1 = _exact_piece_values(s1, grid)
    p2 = _exact_piece_values(s2, grid)
    one = Fraction(1)
    q1 = [one - p for p in p1]
    q2 = [one - p for p in p2]

    hh = a * _sign_weighted_sum(p1, p2)
    ll = b * _sign_weighted_sum(q1, q2)
    hl = b * sum(p1, Fraction(0)) * sum(q2, Fraction(0))
    lh = -b * sum(q1, Fraction(0)) * sum(p2, Fraction(0))
    settled_sum = hh + hl + lh + ll

    replay_sum = sum((x * y + (one - x) * (one - y) for x, y in zip(p1, p2)), Fraction(0))
    pairs = Fraction(m * m)
    replay_probability = replay_sum / pairs
    if replay_probability == 1:
        raise ValueError("every deal replays; the configured game never settles")
    value = (settled_sum / pairs) / (one - replay_probability)
    return ExactDiscreteValue(value=value, replay_probability=replay_probability)


def convergence_report(
    cfg: GameConfig,
    s1: Strategy,
    s2: Strategy,
    schedule: Sequence[int],
    seed: int,
    chunk_size: int = DEFAULT_CHUNK_SIZE,
) -> list[MCEstimate]:
    """Run ``simulate`` at each hand count with per-row derived seeds.

    Row k uses seed ``seed + k``, so rows are independent but the whole report
    is reproducible from the base seed.
    """
    if not schedule:
        raise ValueError("schedule must contain at least one hand count")
    return [
        simulate(cfg, s1, s2, hands=h, seed=seed + k, chunk_size=chunk_size)
        for k, h in enumerate(schedule)
    ]
