"""Best responses, exploitability, and fictitious-play equilibrium search.

The conditional EVs of the two bets are piecewise linear in the own card, so
a best response is found exactly: per piece, the sign changes of their
difference come from a linear solve, and the pointwise argmax action rule is
assembled from those cut points. Exploitability is the best-response value;
in this symmetric zero-sum game it is zero exactly at a symmetric equilibrium
strategy.

Fictitious play runs over strategies constant on K uniform bins. Pointwise
averaging of the High-probability curves is exact because the payoff is
affine in each player's curve. Because coarse bins cannot always distinguish
strategies that differ only on indifference regions, the solver additionally
polishes its incumbent with per-bin golden-section descent on the (convex)
exploitability whenever plain averaging stalls; the result it reports is the
best strategy found, certified by the exploitability operation itself.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Sequence

import numpy as np

from .analytic import closed_form_equilibrium, conditional_evs, expected_payoff
from .engine import GameConfig
from .strategy import Strategy

_INV_PHI = (np.sqrt(5.0) - 1.0) / 2.0


@dataclass(frozen=True)
class BestResponse:
    """A pointwise-argmax action rule and its exact value vs the opponent."""

    action_rule: Strategy
    value: float


@dataclass(frozen=True)
class EquilibriumResult:
    """Outcome of a fictitious-play run.

    ``trace`` records checkpoints as (iteration, exploitability of the running
    average at that iteration, best exploitability found so far).
    """

    strategy: Strategy
    exploitability: float
    iterations: int
    bin_count: int
    converged: bool
    trace: tuple[tuple[int, float, float], ...]


@dataclass(frozen=True)
class RatioSweepRow:
    ratio: float
    t_star: float
    p_star: float
    exploitability: float
    iterations: int
    converged: bool


def best_response(cfg: GameConfig, opponent: Strategy) -> BestResponse:
    """Exact pure best response against a fixed opponent (ties bet High)."""
    evs = conditional_evs(cfg, opponent)
    knots = np.asarray(evs.ev_high.knots)
    d = np.asarray(evs.ev_high.values) - np.asarray(evs.ev_low.values)

    cuts = set(float(x) for x in knots)
    for i in range(len(knots) - 1):
        d0, d1 = d[i], d[i + 1]
        if d0 * d1 < 0.0:
            r = knots[i] + (knots[i + 1] - knots[i]) * d0 / (d0 - d1)
            if knots[i] < r < knots[i + 1]:
                cuts.add(float(r))
    xs = sorted(cuts)

    # Classify each cell by the difference at its midpoint; ties go High.
    mids = (np.asarray(xs[:-1]) + np.asarray(xs[1:])) / 2.0
    d_mid = np.interp(mids, knots, d)
    actions = d_mid >= 0.0

    breakpoints: list[float] = []
    high: list[float] = [1.0 if actions[0] else 0.0]
    for x, act in zip(xs[1:-1], actions[1:]):
        if bool(act) != (high[-1] == 1.0):
            breakpoints.append(x)
            high.append(1.0 if act else 0.0)
    rule = Strategy(breakpoints=tuple(breakpoints), high_prob=tuple(high))
    value = expected_payoff(cfg, rule, opponent).value
    return BestResponse(action_rule=rule, value=value)


def exploitability(cfg: GameConfig, s: Strategy) -> float:
    """Best-response value against ``s``; zero certifies a symmetric equilibrium."""
    return best_response(cfg, s).value


def _bin_edges(bins: int) -> np.ndarray:
    return np.linspace(0.0, 1.0, bins + 1)


def _binned(interior: tuple[float, ...], h: np.ndarray) -> Strategy:
    return Strategy(breakpoints=interior, high_prob=tuple(float(x) for x in h))


def _bin_high_fraction(rule: Strategy, edges: np.ndarray) -> np.ndarray:
    """Measure of each bin on which a 0/1 action rule bets High, as a fraction."""
    bins = len(edges) - 1
    out = np.zeros(bins)
    pieces = (0.0, *rule.breakpoints, 1.0)
    for lo, hi, val in zip(pieces[:-1], pieces[1:], rule.high_prob):
        if val == 0.0:
            continue
        overlap = np.minimum(hi, edges[1:]) - np.maximum(lo, edges[:-1])
        out += np.maximum(overlap, 0.0)
    return out * bins


def _golden_min(f: Callable[[float], float], tol: float = 1e-13) -> tuple[float, float]:
    """Minimize a unimodal function on [0, 1]; checks both endpoints too."""
    lo, hi = 0.0, 1.0
    c = hi - _INV_PHI * (hi - lo)
    e = lo + _INV_PHI * (hi - lo)
    fc, fe = f(c), f(e)
    while hi - lo > tol:
        if fc <= fe:
            hi, e, fe = e, c, fc
            c = hi - _INV_PHI * (hi - lo)
            fc = f(c)
        else:
            lo, c, fc = c, e, fe
            e = lo + _INV_PHI * (hi - lo)
            fe = f(e)
    candidates = [((lo + hi) / 2.0, f((lo + hi) / 2.0)), (0.0, f(0.0)), (1.0, f(1.0))]
    return min(candidates, key=lambda item: item[1])


def _polish(
    cfg: GameConfig,
    interior: tuple[float, ...],
    h: np.ndarray,
    best_value: float,
    epsilon: float,
    max_sweeps: int = 4,
) -> tuple[np.ndarray, float]:
    """Per-bin golden-section descent on exploitability (convex per coordinate)."""
    h = h.copy()
    for _ in range(max_sweeps):
        improved = False
        for i in range(len(h)):

            def objective(x: float, _i: int = i) -> float:
                trial = h.copy()
                trial[_i] = x
                return exploitability(cfg, _binned(interior, trial))

            x, fx = _golden_min(objective)
            if fx < best_value:
                h[i] = x
                best_value = fx
                improved = True
            if best_value <= epsilon:
                return h, best_value
        if not improved:
            break
    return h, best_value


def fictitious_play(
    cfg: GameConfig,
    bins: int,
    epsilon: float,
    max_iters: int = 5000,
) -> EquilibriumResult:
    """Find a low-exploitability binned strategy by best-response averaging.

    Starts from the uninformative curve h = 1/2, best-responds to the running
    average, and averages the response's per-bin High measure back in. Stops
    at the first strategy with exploitability <= epsilon; otherwise returns
    the best strategy found within ``max_iters`` (after a final polish pass).
    A non-converged run is reported via ``converged=False``, never raised.
    """
    if not cfg.is_continuous:
        raise ValueError("fictitious play runs on the continuous card model")
    if bins < 2:
        raise ValueError(f"need at least 2 bins, got {bins}")
    if epsilon <= 0:
        raise ValueError(f"epsilon must be positive, got {epsilon}")
    if max_iters < 1:
        raise ValueError(f"max_iters must be at least 1, got {max_iters}")

    edges = _bin_edges(bins)
    interior = tuple(float(x) for x in edges[1:-1])
    h = np.full(bins, 0.5)
    avg = _binned(interior, h)

    best_h, best_value = h.copy(), exploitability(cfg, avg)
    last_value = best_value
    trace: list[tuple[int, float, float]] = [(0, best_value, best_value)]
    iterations = 0
    last_improvement = 0
    polish_budget = 10
    # Mid-run polishing is cheap only for small bin counts; large runs polish
    # once at the end if still above epsilon.
    stall_window = 250 if bins <= 64 else max_iters + 1

    if best_value > epsilon:
        for n in range(1, max_iters + 1):
            iterations = n
            response = best_response(cfg, avg)
            fraction = _bin_high_fraction(response.action_rule, edges)
            h = (n * h + fraction) / (n + 1)
            avg = _binned(interior, h)
            last_value = exploitability(cfg, avg)
            if last_value < best_value:
                if last_value < best_value * 0.99:
                    last_improvement = n
                best_value = last_value
                best_h = h.copy()
            if n % 50 == 0:
                trace.append((n, last_value, best_value))
            if best_value <= epsilon:
                break
            if n - last_improvement >= stall_window and polish_budget > 0:
                polish_budget -= 1
                last_improvement = n
                best_h, best_value = _polish(cfg, interior, best_h, best_value, epsilon)
                if best_value <= epsilon:
                    break

    if best_value > epsilon and polish_budget > 0:
        best_h, best_value = _polish(cfg, interior, best_h, best_value, epsilon)

    if trace and trace[-1][0] == iterations:
        trace.pop()
    trace.append((iterations, last_value, best_value))
    return EquilibriumResult(
        strategy=_binned(interior, best_h),
        exploitability=best_value,
        iterations=iterations,
        bin_count=bins,
        converged=best_value <= epsilon,
        trace=tuple(trace),
    )


def ratio_sweep(
    ratios: Sequence[float],
    bins: int = 200,
    epsilon: float = 1e-3,
    max_iters: int = 5000,
) -> list[RatioSweepRow]:
    """Closed-form equilibrium plus fictitious-play verification per bet ratio.

    Each row carries the closed-form (t*, p*) for the ratio and the achieved
    exploitability and iteration count of the solver run (low bet fixed at 1,
    so epsilon is in units of the low bet). Non-convergence is flagged on the
    row, not raised.
    """
    rows = []
    for ratio in ratios:
        if ratio <= 1.0:
            raise ValueError(f"bet ratio must exceed 1, got {ratio!r}")
        cfg = GameConfig(Fraction(ratio), Fraction(1))
        point = closed_form_equilibrium(cfg)
        result = fictitious_play(cfg, bins=bins, epsilon=epsilon, max_iters=max_iters)
        rows.append(
            RatioSweepRow(
                ratio=float(ratio),
                t_star=point.t_star,
                p_star=point.p_star,
                exploitability=result.exploitability,
                iterations=result.iterations,
                converged=result.converged,
            )
        )
    return rows
