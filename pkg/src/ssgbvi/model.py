"""Explicit simple stochastic games with exact-rational transitions."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Mapping, Sequence

import numpy as np
import scipy.sparse as sp


class Player(enum.Enum):
    MAX = "max"
    MIN = "min"

    def __str__(self) -> str:
        return self.value


MAX = Player.MAX
MIN = Player.MIN

# label of the probability-1 self-loop synthesized for target, sink and frozen states
LOOP = "loop"


class ValidationError(ValueError):
    """A game violates the structural invariants; ``report`` lists every finding."""

    def __init__(self, report: "ValidationReport") -> None:
        self.report = report
        super().__init__("; ".join(v.message for v in report.violations))


MalformedGame = ValidationError


class UnknownAction(KeyError):
    pass


@dataclass(frozen=True)
class Action:
    label: str
    successors: tuple[tuple[int, Fraction], ...]

    @property
    def targets(self) -> tuple[int, ...]:
        return tuple(t for t, _ in self.successors)


@dataclass(frozen=True)
class StochasticGame:
    """Immutable turn-based game graph.

    States are dense indices ``0..n-1`` in declaration order; ``names`` maps
    them back to identifiers.  ``actions[s]`` is the ordered availability of
    state ``s``.  Probabilities are :class:`~fractions.Fraction`; the float
    views used by the iterative solvers are derived lazily and cached.
    """

    names: tuple[str, ...]
    owners: tuple[Player, ...]
    actions: tuple[tuple[Action, ...], ...]
    initial: int
    target: int
    sink: int

    @property
    def n_states(self) -> int:
        return len(self.names)

    def __len__(self) -> int:
        return len(self.names)

    @cached_property
    def index(self) -> dict[str, int]:
        return {name: i for i, name in enumerate(self.names)}

    def state(self, s: int | str) -> int:
        if isinstance(s, str):
            return self.index[s]
        return s

    def action_index(self, s: int | str, a: int | str) -> int:
        s = self.state(s)
        if isinstance(a, str):
            for i, act in enumerate(self.actions[s]):
                if act.label == a:
                    return i
            raise UnknownAction(f"action {a!r} not available in {self.names[s]!r}")
        if not 0 <= a < len(self.actions[s]):
            raise UnknownAction(f"action #{a} not available in {self.names[s]!r}")
        return a

    @property
    def is_mdp(self) -> bool:
        return all(
            o is MAX for i, o in enumerate(self.owners) if i not in (self.target, self.sink)
        )

    def successors(self, s: int) -> set[int]:
        return {t for act in self.actions[s] for t, _ in act.successors}

    def predecessors(self) -> list[list[int]]:
        preds: list[list[int]] = [[] for _ in self.names]
        for s, acts in enumerate(self.actions):
            for t in sorted({t for act in acts for t, _ in act.successors}):
                preds[t].append(s)
        return preds

    # float views -----------------------------------------------------------

    @cached_property
    def _sa_offsets(self) -> np.ndarray:
        counts = [len(acts) for acts in self.actions]
        return np.concatenate(([0], np.cumsum(counts))).astype(np.intp)

    @cached_property
    def _sa_state(self) -> np.ndarray:
        return np.repeat(np.arange(self.n_states), np.diff(self._sa_offsets))

    @cached_property
    def _matrix(self) -> sp.csr_matrix:
        # rows are (state, action) pairs; column order inside a row follows the
        # successor list so float sums accumulate in a fixed order
        indptr = [0]
        indices: list[int] = []
        data: list[float] = []
        for acts in self.actions:
            for act in acts:
                for t, p in act.successors:
                    indices.append(t)
                    data.append(float(p))
                indptr.append(len(indices))
        n_sa = len(indptr) - 1
        return sp.csr_matrix(
            (np.array(data, dtype=float), np.array(indices, dtype=np.intp), np.array(indptr)),
            shape=(n_sa, self.n_states),
        )

    @cached_property
    def _is_max(self) -> np.ndarray:
        return np.array([o is MAX for o in self.owners], dtype=bool)

    @cached_property
    def _float_actions(self) -> list[list[tuple[tuple[int, ...], tuple[float, ...]]]]:
        return [
            [(act.targets, tuple(float(p) for _, p in act.successors)) for act in acts]
            for acts in self.actions
        ]

    def action_values(self, f: np.ndarray) -> np.ndarray:
        """``f(s, a)`` for every state-action pair, in (state, action) order."""
        return self._matrix @ f


def make_game(
    states: Sequence[tuple[str, Player | str]],
    actions: Mapping[str, Sequence[tuple[str, Sequence[tuple[str, Fraction | int | str]]]]],
    initial: str,
    target: str,
    sink: str,
) -> StochasticGame:
    """Build a game from names; target and sink get their self-loops automatically.

    ``actions`` maps a state name to ``[(label, [(successor, prob), ...]), ...]``.
    No validation happens here; run :func:`validate_game` on the result.
    """
    names = tuple(name for name, _ in states)
    owners = tuple(Player(o) if not isinstance(o, Player) else o for _, o in states)
    idx = {name: i for i, name in enumerate(names)}
    acts: list[tuple[Action, ...]] = []
    for name in names:
        if name in (target, sink) and name not in actions:
            acts.append((Action(LOOP, ((idx[name], Fraction(1)),)),))
            continue
        block = []
        for label, succ in actions.get(name, ()):
            block.append(Action(label, tuple((idx[t], Fraction(p)) for t, p in succ)))
        acts.append(tuple(block))
    return StochasticGame(names, owners, tuple(acts), idx[initial], idx[target], idx[sink])


# validation ----------------------------------------------------------------


@dataclass(frozen=True)
class Violation:
    kind: str
    message: str
    state: str | None = None
    action: str | None = None


@dataclass
class ValidationReport:
    violations: list[Violation] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def __iter__(self):
        return iter(self.violations)

    def __len__(self) -> int:
        return len(self.violations)

    def add(self, kind: str, message: str, state: str | None = None, action: str | None = None):
        self.violations.append(Violation(kind, message, state, action))


def validate_game(game: StochasticGame) -> ValidationReport:
    report = ValidationReport()
    n = game.n_states
    if len(game.owners) != n or len(game.actions) != n:
        report.add("shape", "owners/actions do not match the state list")
        return report
    if len(set(game.names)) != n:
        report.add("names", "duplicate state identifiers")
    for role in ("initial", "target", "sink"):
        if not 0 <= getattr(game, role) < n:
            report.add("role", f"{role} state out of range")
    if not report.ok:
        return report
    if game.target == game.sink:
        report.add("role", "target and sink coincide")

    for s, acts in enumerate(game.actions):
        name = game.names[s]
        if not acts:
            report.add("blocking", f"blocking state {name}", name)
            continue
        labels = [a.label for a in acts]
        for label in sorted({x for x in labels if labels.count(x) > 1}):
            report.add("duplicate-action", f"duplicate action label {label} at {name}", name, label)
        for act in acts:
            where = f"({name},{act.label})"
            if not act.successors:
                report.add("empty-distribution", f"empty distribution at {where}", name, act.label)
                continue
            total = Fraction(0)
            seen = set()
            for t, p in act.successors:
                if not 0 <= t < n:
                    report.add("successor", f"unknown successor at {where}", name, act.label)
                    continue
                if t in seen:
                    report.add("successor", f"repeated successor {game.names[t]} at {where}",
                               name, act.label)
                seen.add(t)
                if not 0 < p <= 1:
                    report.add("probability", f"probability {p} out of range at {where}",
                               name, act.label)
                total += p
            if total != 1:
                report.add("mass", f"distribution mass {total} != 1 at {where}", name, act.label)
    for s in (game.target, game.sink):
        acts = game.actions[s]
        if len(acts) != 1 or acts[0].successors != ((s, Fraction(1)),):
            report.add("absorbing", f"{game.names[s]} must have a single probability-1 self-loop",
                       game.names[s])
    return report


def require_valid(game: StochasticGame) -> None:
    report = validate_game(game)
    if not report.ok:
        raise ValidationError(report)


# preprocessing ---------------------------------------------------------------


def can_reach(game: StochasticGame, goal: Iterable[int]) -> set[int]:
    """States with a positive-probability path into ``goal``."""
    preds = game.predecessors()
    seen = set(goal)
    stack = list(seen)
    while stack:
        t = stack.pop()
        for s in preds[t]:
            if s not in seen:
                seen.add(s)
                stack.append(s)
    return seen


def preprocess_merge_unreachable(game: StochasticGame) -> StochasticGame:
    """Merge every state that cannot reach the target into the sink.

    Returns ``game`` itself when there is nothing to merge.
    """
    require_valid(game)
    alive = can_reach(game, [game.target])
    alive.add(game.sink)
    if len(alive) == game.n_states:
        return game
    keep = [s for s in range(game.n_states) if s in alive]
    new_index = {s: i for i, s in enumerate(keep)}
    new_sink = new_index[game.sink]

    def remap(act: Action) -> Action:
        mass: dict[int, Fraction] = {}
        for t, p in act.successors:
            u = new_index.get(t, new_sink)
            mass[u] = mass.get(u, Fraction(0)) + p
        return Action(act.label, tuple(mass.items()))

    actions = tuple(tuple(remap(a) for a in game.actions[s]) for s in keep)
    return StochasticGame(
        tuple(game.names[s] for s in keep),
        tuple(game.owners[s] for s in keep),
        actions,
        new_index.get(game.initial, new_sink),
        new_index[game.target],
        new_sink,
    )


# action values -----------------------------------------------------------------


def _is_exact(f) -> bool:
    if isinstance(f, np.ndarray):
        return f.dtype == object
    return isinstance(f[0], (Fraction, int)) if len(f) else True


def action_value(game: StochasticGame, f, s: int | str, a: int | str):
    """Successor-weighted average ``f(s, a)``.

    Exact when ``f`` holds rationals, binary64 (summed in successor order)
    when ``f`` is a float array.
    """
    s = game.state(s)
    a = game.action_index(s, a)
    if _is_exact(f):
        return sum((p * f[t] for t, p in game.actions[s][a].successors), Fraction(0))
    targets, probs = game._float_actions[s][a]
    acc = 0.0
    for t, p in zip(targets, probs):
        acc += p * f[t]
    return acc


@dataclass(frozen=True)
class Strategy:
    """Deterministic memoryless choice (action index) for one player's states."""

    player: Player
    choice: Mapping[int, int]

    def labels(self, game: StochasticGame) -> dict[str, str]:
        return {game.names[s]: game.actions[s][a].label for s, a in self.choice.items()}

    def __getitem__(self, s: int) -> int:
        return self.choice[s]
