"""Synchronous value iteration: classic VI, naive BVI and deflating BVI."""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Iterator

import numpy as np

from .graph import (
    EndComponent,
    _mec_support,
    best_exit,
    find_msec,
    leaving_pairs,
    staying_actions,
)
from .model import MAX, MIN, Action, StochasticGame, Strategy, _is_exact, action_value

DEFAULT_MAX_ITERS = 10**7


class NotCertified(ValueError):
    pass


@dataclass
class Bounds:
    lower: np.ndarray
    upper: np.ndarray
    # per state, the action that last strictly raised the lower bound
    witness: np.ndarray | None = None

    def copy(self) -> "Bounds":
        w = None if self.witness is None else self.witness.copy()
        return Bounds(self.lower.copy(), self.upper.copy(), w)

    def gap(self, s: int) -> float:
        return float(self.upper[s] - self.lower[s])


def initial_bounds(game: StochasticGame) -> Bounds:
    lower = np.zeros(game.n_states)
    upper = np.ones(game.n_states)
    lower[game.target] = 1.0
    upper[game.sink] = 0.0
    return Bounds(lower, upper)


@dataclass
class SolveReport:
    method: str
    iterations: int
    lower: float
    upper: float
    epsilon: float
    converged: bool
    status: str = "converged"
    deflate_calls: int = 0
    msec_count_last: int = 0
    explored_states: int = 0
    wall_time: float = 0.0
    trace: list[tuple] | None = None
    bounds: Bounds | None = field(default=None, repr=False)

    @property
    def bounds_at_initial(self) -> tuple[float, float]:
        return self.lower, self.upper

    @property
    def gap(self) -> float:
        return self.upper - self.lower


# Bellman operator -----------------------------------------------------------


def bellman_update(game: StochasticGame, f):
    """One synchronous update of every state.

    ``f`` may be a float vector, an ``(n, k)`` float array (columns updated
    independently), or a sequence of rationals for exact arithmetic.
    """
    if _is_exact(f):
        out = []
        for s, acts in enumerate(game.actions):
            vals = [action_value(game, f, s, a) for a in range(len(acts))]
            out.append(max(vals) if game.owners[s] is MAX else min(vals))
        return out
    return _bellman(game, game.action_values(f))


def _bellman(game: StochasticGame, sa: np.ndarray) -> np.ndarray:
    starts = game._sa_offsets[:-1]
    hi = np.maximum.reduceat(sa, starts, axis=0)
    lo = np.minimum.reduceat(sa, starts, axis=0)
    is_max = game._is_max if sa.ndim == 1 else game._is_max[:, None]
    return np.where(is_max, hi, lo)


def _first_argmax(game: StochasticGame, sa: np.ndarray, best: np.ndarray) -> np.ndarray:
    """Per state, the lowest action index whose value equals ``best``."""
    offsets = game._sa_offsets
    rows = np.arange(len(sa))
    hit = np.where(sa == best[game._sa_state], rows, len(sa))
    return np.minimum.reduceat(hit, offsets[:-1]) - offsets[:-1]


def deflate(game: StochasticGame, ec: EndComponent | Iterable[int], f):
    """Lower ``f`` on the component to Maximizer's best exit under the input ``f``."""
    states = ec.states if isinstance(ec, EndComponent) else frozenset(ec)
    cap = best_exit(game, states, f, MAX).value
    out = list(f) if _is_exact(f) else np.array(f, dtype=float, copy=True)
    for s in states:
        if cap < out[s]:
            out[s] = cap
    return out


def _deflatable(game: StochasticGame, ec: EndComponent) -> bool:
    # the target singleton has no exits; deflating it would drop U(target) to 0
    return not ec.states <= {game.target, game.sink}


def deflate_msecs(game: StochasticGame, lower: np.ndarray, upper: np.ndarray) -> tuple[np.ndarray, int]:
    """Deflate ``upper`` on every MSEC candidate found from ``lower``."""
    if not _mec_support(game):
        return upper, 0
    count = 0
    for ec in find_msec(game, lower):
        if _deflatable(game, ec):
            upper = deflate(game, ec, upper)
            count += 1
    return upper, count


def bvi_update(game: StochasticGame, b: Bounds, do_deflate: bool = True) -> Bounds:
    new = bellman_update(game, np.column_stack((b.lower, b.upper)))
    lower, upper = new[:, 0].copy(), new[:, 1].copy()
    if do_deflate:
        upper, _ = deflate_msecs(game, lower, upper)
    return Bounds(lower, upper)


@dataclass
class Iterate:
    iteration: int
    bounds: Bounds
    deflate_calls: int
    msecs: int


def bvi_iterates(game: StochasticGame, deflate_every: int | None = 1) -> Iterator[Iterate]:
    """Endless stream of bounded-VI iterates; ``deflate_every=None`` never deflates."""
    if deflate_every is not None and deflate_every < 1:
        raise ValueError("deflate_every must be >= 1")
    b = initial_bounds(game)
    both = np.column_stack((b.lower, b.upper))
    witness = _first_argmax(game, game.action_values(b.lower), b.lower)
    calls = 0
    msecs = 0
    i = 0
    while True:
        i += 1
        sa = game.action_values(both)
        new = _bellman(game, sa)
        raised = new[:, 0] > both[:, 0]
        if raised.any():
            fresh = _first_argmax(game, sa[:, 0], new[:, 0])
            witness = np.where(raised, fresh, witness)
        both = new
        if deflate_every is not None and i % deflate_every == 0:
            upper, msecs = deflate_msecs(game, both[:, 0], both[:, 1])
            both[:, 1] = upper
            calls += msecs
        yield Iterate(i, Bounds(both[:, 0], both[:, 1], witness), calls, msecs)


def _bvi_loop(game, method, epsilon, deflate_every, max_iters, check_all, trace) -> SolveReport:
    if epsilon <= 0:
        raise ValueError("epsilon must be positive")
    start = time.perf_counter()
    s0 = game.initial
    rows: list[tuple] | None = [] if trace else None
    it = None
    converged = False
    for it in bvi_iterates(game, deflate_every):
        lo, hi = float(it.bounds.lower[s0]), float(it.bounds.upper[s0])
        if rows is not None:
            rows.append((it.iteration, lo, hi, hi - lo, it.deflate_calls))
        if check_all:
            done = float(np.max(it.bounds.upper - it.bounds.lower)) < epsilon
        else:
            done = hi - lo < epsilon
        if done:
            converged = True
            break
        if it.iteration >= max_iters:
            break
    b = it.bounds.copy()
    return SolveReport(
        method=method,
        iterations=it.iteration,
        lower=float(b.lower[s0]),
        upper=float(b.upper[s0]),
        epsilon=epsilon,
        converged=converged,
        status="converged" if converged else "limit",
        deflate_calls=it.deflate_calls,
        msec_count_last=it.msecs,
        explored_states=game.n_states,
        wall_time=time.perf_counter() - start,
        trace=rows,
        bounds=b,
    )


def solve_bvi(
    game: StochasticGame,
    epsilon: float = 1e-6,
    deflate_every: int = 1,
    max_iters: int = DEFAULT_MAX_ITERS,
    check_all: bool = False,
    trace: bool = False,
) -> SolveReport:
    """Bounded value iteration with deflation of MSEC candidates.

    Stops once ``U(s0) - L(s0) < epsilon`` (every state with ``check_all``)
    or after ``max_iters`` updates; the value of ``s0`` lies in the reported
    interval either way.
    """
    return _bvi_loop(game, "bvi", epsilon, deflate_every, max_iters, check_all, trace)


def solve_naive_bvi(
    game: StochasticGame,
    epsilon: float = 1e-6,
    max_iters: int = DEFAULT_MAX_ITERS,
    check_all: bool = False,
    trace: bool = False,
) -> SolveReport:
    """Lower/upper iteration without deflation; stalls on bloated end components."""
    return _bvi_loop(game, "bvi-naive", epsilon, None, max_iters, check_all, trace)


def solve_vi_classic(
    game: StochasticGame,
    delta: float = 1e-6,
    max_iters: int = DEFAULT_MAX_ITERS,
    trace: bool = False,
) -> SolveReport:
    """Lower iteration stopped when the max-norm change drops below ``delta``.

    There is no upper bound: the report carries ``upper = 1`` and
    ``converged = False``.  ``status`` is ``"stopped"`` when the small-change
    rule fired and ``"limit"`` when ``max_iters`` ran out.
    """
    if delta <= 0:
        raise ValueError("delta must be positive")
    start = time.perf_counter()
    s0 = game.initial
    lower = initial_bounds(game).lower
    rows: list[tuple] | None = [] if trace else None
    status = "limit"
    i = 0
    while i < max_iters:
        i += 1
        new = bellman_update(game, lower)
        change = float(np.max(np.abs(new - lower)))
        lower = new
        if rows is not None:
            rows.append((i, float(lower[s0]), 1.0, 1.0 - float(lower[s0]), 0))
        if change < delta:
            status = "stopped"
            break
    upper = np.ones(game.n_states)
    upper[game.sink] = 0.0
    return SolveReport(
        method="vi",
        iterations=i,
        lower=float(lower[s0]),
        upper=1.0,
        epsilon=delta,
        converged=False,
        status=status,
        explored_states=game.n_states,
        wall_time=time.perf_counter() - start,
        trace=rows,
        bounds=Bounds(lower, upper),
    )


# collapsing ---------------------------------------------------------------------


def collapse_sec(
    game: StochasticGame,
    ec: EndComponent | Iterable[int],
    certified: bool,
    name: str | None = None,
) -> StochasticGame:
    """Merge a simple end component into one Maximizer state.

    The merged state offers Maximizer's exiting actions of the component, or,
    when Maximizer has none, all staying actions (which makes it absorbing).
    The caller must vouch that the component is simple; values are only
    preserved in that case.
    """
    if not certified:
        raise NotCertified("collapse_sec needs a component certified as simple")
    states = ec.states if isinstance(ec, EndComponent) else frozenset(ec)
    if not states or states & {game.target, game.sink}:
        raise ValueError("cannot collapse an empty set or one containing target/sink")
    members = sorted(states)
    if name is None:
        name = "".join(game.names[s] for s in members)
        taken = set(game.names) - {game.names[s] for s in members}
        while name in taken:
            name += "'"
    keep = [s for s in range(game.n_states) if s not in states or s == members[0]]
    new = {s: i for i, s in enumerate(keep)}
    merged = new[members[0]]
    for s in members:
        new[s] = merged

    def remap(succ) -> tuple:
        mass: dict[int, Fraction] = {}
        for t, p in succ:
            mass[new[t]] = mass.get(new[t], Fraction(0)) + p
        return tuple(mass.items())

    exits = [(s, a) for s, a in leaving_pairs(game, states) if game.owners[s] is MAX]
    if exits:
        chosen = exits
    else:
        stay = staying_actions(game, states)
        chosen = [(s, a) for s in members for a in sorted(stay[s])]
    labels = [game.actions[s][a].label for s, a in chosen]
    merged_actions = tuple(
        Action(
            lab if labels.count(lab) == 1 else f"{game.names[s]}.{lab}",
            remap(game.actions[s][a].successors),
        )
        for (s, a), lab in zip(chosen, labels)
    )

    names, owners, actions = [], [], []
    for s in keep:
        if s == members[0]:
            names.append(name)
            owners.append(MAX)
            actions.append(merged_actions)
        else:
            names.append(game.names[s])
            owners.append(game.owners[s])
            actions.append(tuple(Action(a.label, remap(a.successors)) for a in game.actions[s]))
    return StochasticGame(
        tuple(names), tuple(owners), tuple(actions),
        new[game.initial], new[game.target], new[game.sink],
    )


# strategies -----------------------------------------------------------------------


def extract_strategies(game: StochasticGame, b: Bounds) -> tuple[Strategy, Strategy]:
    """Memoryless strategies read off the bounds; ties go to the lowest action index.

    Minimizer minimises ``U(s, a)``.  Maximizer maximises ``L(s, a)``, except
    that when ``b.witness`` is present (bounds produced by the iterative
    solvers) each Maximizer state keeps the action that last strictly raised
    its lower bound.  A plain argmax can pick an action that merely cycles
    inside an end component, which guarantees nothing; the recorded action
    secures at least ``L``.
    """
    lo = game.action_values(b.lower)
    hi = game.action_values(b.upper)
    offsets = game._sa_offsets
    sigma, tau = {}, {}
    for s in range(game.n_states):
        a0, a1 = offsets[s], offsets[s + 1]
        if game.owners[s] is MAX:
            if b.witness is not None:
                sigma[s] = int(b.witness[s])
            else:
                sigma[s] = int(np.argmax(lo[a0:a1]))
        else:
            tau[s] = int(np.argmin(hi[a0:a1]))
    return Strategy(MAX, sigma), Strategy(MIN, tau)
