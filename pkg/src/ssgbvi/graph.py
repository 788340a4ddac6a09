"""Structural analysis: SCCs, end components, exits, MSEC candidates."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Mapping, Sequence

import numpy as np

from .model import (
    LOOP,
    MAX,
    MIN,
    Action,
    Player,
    StochasticGame,
    _is_exact,
    action_value,
)


def tarjan(nodes: Iterable[int], succ: Callable[[int], Iterable[int]]) -> list[list[int]]:
    """Strongly connected components in reverse topological order (iterative Tarjan).

    ``nodes`` are visited in the given order, so the output is deterministic.
    Successors not in ``nodes`` are ignored.
    """
    nodes = list(nodes)
    member = set(nodes)
    index: dict[int, int] = {}
    low: dict[int, int] = {}
    on_stack: set[int] = set()
    stack: list[int] = []
    out: list[list[int]] = []
    counter = 0
    for root in nodes:
        if root in index:
            continue
        work = [(root, iter(succ(root)))]
        index[root] = low[root] = counter
        counter += 1
        stack.append(root)
        on_stack.add(root)
        while work:
            v, it = work[-1]
            pushed = False
            for w in it:
                if w not in member:
                    continue
                if w not in index:
                    index[w] = low[w] = counter
                    counter += 1
                    stack.append(w)
                    on_stack.add(w)
                    work.append((w, iter(succ(w))))
                    pushed = True
                    break
                if w in on_stack:
                    low[v] = min(low[v], index[w])
            if pushed:
                continue
            work.pop()
            if work:
                u = work[-1][0]
                low[u] = min(low[u], low[v])
            if low[v] == index[v]:
                comp = []
                while True:
                    w = stack.pop()
                    on_stack.discard(w)
                    comp.append(w)
                    if w == v:
                        break
                out.append(sorted(comp))
    return out


def scc_decomposition(game: StochasticGame) -> list[frozenset[int]]:
    """SCCs of the underlying graph, sinks of the condensation first."""
    return [
        frozenset(c)
        for c in tarjan(range(game.n_states), lambda s: sorted(game.successors(s)))
    ]


@dataclass(frozen=True)
class EndComponent:
    """State set ``states`` with witness actions (indices) per member state."""

    states: frozenset[int]
    actions: tuple[tuple[int, frozenset[int]], ...]

    @classmethod
    def of(cls, states: Iterable[int], witness: Mapping[int, Iterable[int]]) -> "EndComponent":
        states = frozenset(states)
        return cls(states, tuple((s, frozenset(witness[s])) for s in sorted(states)))

    @property
    def witness(self) -> dict[int, frozenset[int]]:
        return dict(self.actions)

    def __contains__(self, s: int) -> bool:
        return s in self.states

    def __iter__(self):
        return iter(sorted(self.states))

    def __len__(self) -> int:
        return len(self.states)

    def names(self, game: StochasticGame) -> set[str]:
        return {game.names[s] for s in self.states}


def staying_actions(game: StochasticGame, states: Iterable[int]) -> dict[int, frozenset[int]]:
    states = frozenset(states)
    return {
        s: frozenset(
            i for i, act in enumerate(game.actions[s]) if all(t in states for t, _ in act.successors)
        )
        for s in states
    }


def is_end_component(game: StochasticGame, states: Iterable[int],
                     witness: Mapping[int, Iterable[int]] | None = None) -> bool:
    """Check both end-component conditions directly from their definition."""
    states = frozenset(states)
    if not states:
        return False
    if witness is None:
        witness = staying_actions(game, states)
    for s in states:
        acts = list(witness.get(s, ()))
        if not acts:
            return False
        for a in acts:
            if any(t not in states for t, _ in game.actions[s][a].successors):
                return False
    comps = tarjan(
        sorted(states),
        lambda s: sorted({t for a in witness[s] for t, _ in game.actions[s][a].successors}),
    )
    return len(comps) == 1


def mec_decomposition(
    game: StochasticGame,
    available: Sequence[Iterable[int]] | None = None,
    states: Iterable[int] | None = None,
) -> list[EndComponent]:
    """Maximal end components, ordered by smallest member index.

    ``available`` optionally restricts each state's actions (by index);
    ``states`` restricts the search to a subset (ECs never leave it).
    """
    if states is None:
        states = range(game.n_states)
    alive = set(states)
    avail: dict[int, set[int]] = {}
    for s in alive:
        acts = range(len(game.actions[s])) if available is None else available[s]
        avail[s] = set(acts)

    def edges(s: int) -> list[int]:
        return sorted({t for a in avail[s] for t, _ in game.actions[s][a].successors})

    while True:
        for s in [s for s in alive if not avail[s]]:
            alive.discard(s)
        comps = tarjan(sorted(alive), edges)
        comp_of = {s: i for i, c in enumerate(comps) for s in c}
        changed = False
        for s in alive:
            c = comp_of[s]
            leaving = {
                a
                for a in avail[s]
                if any(comp_of.get(t) != c for t, _ in game.actions[s][a].successors)
            }
            if leaving:
                avail[s] -= leaving
                changed = True
        if not changed and all(avail[s] for s in alive):
            break
    result = [EndComponent.of(c, {s: avail[s] for s in c}) for c in comps]
    result.sort(key=lambda ec: min(ec.states))
    return result


@dataclass(frozen=True)
class ExitValue:
    player: Player
    value: float | Fraction
    witness: tuple[int, int] | None = None


def leaving_pairs(game: StochasticGame, states: Iterable[int]):
    states = frozenset(states)
    for s in sorted(states):
        for a, act in enumerate(game.actions[s]):
            if any(t not in states for t, _ in act.successors):
                yield s, a


def best_exit(game: StochasticGame, states: Iterable[int], f, player: Player) -> ExitValue:
    """Best ``f``-value among ``player``'s actions leaving ``states``.

    An empty maximum is 0 and an empty minimum is 1.  The first pair attaining
    the extremum (in index order) is reported as witness.
    """
    if isinstance(states, EndComponent):
        states = states.states
    best = None
    witness = None
    for s, a in leaving_pairs(game, states):
        if game.owners[s] is not player:
            continue
        v = action_value(game, f, s, a)
        if best is None or (v > best if player is MAX else v < best):
            best, witness = v, (s, a)
    if best is None:
        zero_or_one = 0 if player is MAX else 1
        best = Fraction(zero_or_one) if _is_exact(f) else float(zero_or_one)
    return ExitValue(player, best, witness)


def is_bec(game: StochasticGame, ec: EndComponent | Iterable[int], f) -> bool:
    """Bloated: Minimizer's best exit strictly exceeds Maximizer's."""
    states = ec.states if isinstance(ec, EndComponent) else frozenset(ec)
    return best_exit(game, states, f, MIN).value > best_exit(game, states, f, MAX).value


def _mec_support(game: StochasticGame) -> frozenset[int]:
    """States lying in some end component other than the target/sink singletons."""
    cached = game.__dict__.get("_mec_support")
    if cached is None:
        cached = frozenset(
            s
            for ec in mec_decomposition(game)
            if not ec.states <= {game.target, game.sink}
            for s in ec.states
        )
        game.__dict__["_mec_support"] = cached
    return cached


def suboptimal_minimizer_actions(game: StochasticGame, f, states: Iterable[int]) -> dict[int, set[int]]:
    """Per Minimizer state, the actions with ``f(s, a) > f(s)`` (no tolerance)."""
    out: dict[int, set[int]] = {}
    for s in states:
        if game.owners[s] is not MIN:
            continue
        fs = f[s]
        bad = {a for a in range(len(game.actions[s])) if action_value(game, f, s, a) > fs}
        if bad:
            out[s] = bad
    return out


def find_msec(game: StochasticGame, f) -> list[EndComponent]:
    """MECs of the game with Minimizer's ``f``-suboptimal actions removed.

    Called with the exact value vector, this yields exactly the maximal simple
    end components (plus the target singleton, which is never simple).  The
    search is confined to states inside non-trivial MECs of the unmodified game,
    since removing actions only shrinks end components.
    """
    support = _mec_support(game)
    removed = suboptimal_minimizer_actions(game, f, support)
    available = [
        [a for a in range(len(game.actions[s])) if a not in removed.get(s, ())]
        if s in support else []
        for s in range(game.n_states)
    ]
    result = mec_decomposition(game, available, sorted(support))
    result.extend(
        EndComponent.of([s], {s: [0]}) for s in (game.target, game.sink)
    )
    result.sort(key=lambda ec: min(ec.states))
    return result


def restricted_game_with_map(
    game: StochasticGame, visited: Iterable[int], bottom: str = "bot"
) -> tuple[StochasticGame, list[int]]:
    """Game restricted to ``visited`` plus the original index of each new state."""
    visited = set(visited)
    keep = set(visited)
    for s in visited:
        keep |= game.successors(s)
    keep |= {game.target, game.sink}
    order = sorted(keep)
    new = {s: i for i, s in enumerate(order)}
    actions = []
    for s in order:
        if s in visited or s in (game.target, game.sink):
            actions.append(tuple(
                Action(a.label, tuple((new[t], p) for t, p in a.successors))
                for a in game.actions[s]
            ))
        else:
            actions.append((Action(bottom, ((new[s], Fraction(1)),)),))
    g = StochasticGame(
        tuple(game.names[s] for s in order),
        tuple(game.owners[s] for s in order),
        tuple(actions),
        new[game.initial],
        new[game.target],
        new[game.sink],
    )
    return g, order


def restricted_game(game: StochasticGame, visited: Iterable[int]) -> StochasticGame:
    """Visited states keep full availability; their other successors only self-loop.

    Target and sink are always kept (with their own self-loops).
    """
    visited = set(visited)
    if game.initial not in visited:
        raise ValueError("the initial state must be visited")
    return restricted_game_with_map(game, visited)[0]


__all__ = [
    "EndComponent",
    "ExitValue",
    "LOOP",
    "best_exit",
    "find_msec",
    "is_bec",
    "is_end_component",
    "mec_decomposition",
    "restricted_game",
    "scc_decomposition",
    "staying_actions",
    "tarjan",
]
