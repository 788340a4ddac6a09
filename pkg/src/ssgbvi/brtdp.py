"""Simulation-guided asynchronous bounded value iteration (BRTDP).

Each trial samples a path from the initial state along best actions, updates
the bounds of the path's states backwards, and deflates the MSEC candidates of
the game restricted to the states visited so far.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field

import numpy as np

from .graph import find_msec, restricted_game_with_map
from .model import MAX, StochasticGame
from .rng import SplitMix64
from .solve import Bounds, SolveReport, deflate, initial_bounds

DEFAULT_MAX_TRIALS = 10**6


@dataclass
class SimulationPath:
    states: list[int]
    actions: list[int]

    @property
    def final(self) -> int:
        return self.states[-1]

    @property
    def steps(self) -> list[tuple[int, int]]:
        return list(zip(self.states, self.actions))

    def __len__(self) -> int:
        return len(self.states)


@dataclass
class ExplorationState:
    visited: set[int]
    bounds: Bounds
    rng: SplitMix64
    # visited states plus all their successors
    known: set[int] = field(default_factory=set)

    @classmethod
    def fresh(cls, game: StochasticGame, seed: int) -> "ExplorationState":
        ex = cls(set(), initial_bounds(game), SplitMix64(seed))
        ex.visit(game, game.initial)
        return ex

    def visit(self, game: StochasticGame, s: int) -> None:
        if s not in self.visited:
            self.visited.add(s)
            self.known.add(s)
            self.known |= game.successors(s)

    def step_bound(self) -> int:
        return 2 * len(self.known)


def _state_action_values(game: StochasticGame, f: np.ndarray, s: int) -> list[float]:
    out = []
    for targets, probs in game._float_actions[s]:
        acc = 0.0
        for t, p in zip(targets, probs):
            acc += p * f[t]
        out.append(acc)
    return out


def best_actions(game: StochasticGame, b: Bounds, s: int) -> list[int]:
    """Actions attaining max ``U(s, .)`` (Maximizer) or min ``L(s, .)`` (Minimizer)."""
    if game.owners[s] is MAX:
        vals = _state_action_values(game, b.upper, s)
        best = max(vals)
    else:
        vals = _state_action_values(game, b.lower, s)
        best = min(vals)
    return [a for a, v in enumerate(vals) if v == best]


def simulate_path(
    game: StochasticGame,
    ex: ExplorationState,
    k: int,
    weighted: bool = False,
    stop_at_converged: bool = True,
) -> SimulationPath:
    """Sample a path of at most ``k`` states from the initial state.

    ``weighted`` draws successors proportionally to ``delta * (U - L)``
    instead of ``delta`` alone (falling back to ``delta`` when every weight
    vanishes).
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    b = ex.bounds
    s = game.initial
    ex.visit(game, s)
    states, actions = [s], []
    while len(states) < k:
        if s in (game.target, game.sink):
            break
        if stop_at_converged and b.upper[s] - b.lower[s] == 0.0:
            break
        a = ex.rng.choice(best_actions(game, b, s))
        targets, probs = game._float_actions[s][a]
        weights = probs
        if weighted:
            w = [p * (b.upper[t] - b.lower[t]) for t, p in zip(targets, probs)]
            if any(x > 0 for x in w):
                weights = w
        s = targets[ex.rng.weighted_index(weights)]
        actions.append(a)
        states.append(s)
        ex.visit(game, s)
    return SimulationPath(states, actions)


def _update_state(game: StochasticGame, b: Bounds, s: int) -> None:
    lo = _state_action_values(game, b.lower, s)
    hi = _state_action_values(game, b.upper, s)
    if game.owners[s] is MAX:
        b.lower[s], b.upper[s] = max(lo), max(hi)
    else:
        b.lower[s], b.upper[s] = min(lo), min(hi)


def update_along_path(game: StochasticGame, path: SimulationPath, b: Bounds) -> Bounds:
    """Bellman-update the path's states from last to first (in place); returns ``b``."""
    for s in reversed(path.states):
        if s not in (game.target, game.sink):
            _update_state(game, b, s)
    return b


def deflate_visited(game: StochasticGame, ex: ExplorationState) -> tuple[int, int]:
    """Deflate MSEC candidates of the visited-state restricted game.

    Only components made of visited states are used: a frontier state is a
    self-loop in the restricted game with no exit, and deflating it would
    zero an upper bound the original game does not justify.
    Returns ``(deflate calls, candidates found)``.
    """
    sub, orig = restricted_game_with_map(game, ex.visited)
    lower = ex.bounds.lower[orig]
    upper = ex.bounds.upper[orig]
    calls = 0
    for ec in find_msec(sub, lower):
        members = [orig[s] for s in ec.states]
        if any(m not in ex.visited or m in (game.target, game.sink) for m in members):
            continue
        upper = deflate(sub, ec, upper)
        calls += 1
    ex.bounds.upper[orig] = upper
    return calls, calls


def solve_brtdp(
    game: StochasticGame,
    epsilon: float = 1e-6,
    seed: int = 0,
    max_trials: int = DEFAULT_MAX_TRIALS,
    weighted: bool = False,
    stop_at_converged: bool = True,
    trace: bool = False,
    on_trial=None,
) -> SolveReport:
    """Run sample trials until ``U(s0) - L(s0) < epsilon`` or ``max_trials``.

    ``on_trial(trial, exploration_state, path)`` is called after each trial,
    which the property tests use to inspect intermediate bounds.
    """
    if epsilon <= 0:
        raise ValueError("epsilon must be positive")
    start = time.perf_counter()
    s0 = game.initial
    ex = ExplorationState.fresh(game, seed)
    b = ex.bounds
    rows: list[tuple] | None = [] if trace else None
    calls = msecs = 0
    trial = 0
    converged = b.upper[s0] - b.lower[s0] < epsilon
    while not converged and trial < max_trials:
        trial += 1
        path = simulate_path(game, ex, ex.step_bound(), weighted, stop_at_converged)
        update_along_path(game, path, b)
        c, msecs = deflate_visited(game, ex)
        calls += c
        if rows is not None:
            rows.append((trial, len(ex.visited), float(b.lower[s0]), float(b.upper[s0])))
        if on_trial is not None:
            on_trial(trial, ex, path)
        converged = b.upper[s0] - b.lower[s0] < epsilon
    return SolveReport(
        method="brtdp",
        iterations=trial,
        lower=float(b.lower[s0]),
        upper=float(b.upper[s0]),
        epsilon=epsilon,
        converged=bool(converged),
        status="converged" if converged else "limit",
        deflate_calls=calls,
        msec_count_last=msecs,
        explored_states=len(ex.visited),
        wall_time=time.perf_counter() - start,
        trace=rows,
        bounds=b,
    )
