"""Seeded random games for property tests."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .model import LOOP, MAX, MIN, Action, StochasticGame, can_reach, preprocess_merge_unreachable
from .rng import SplitMix64

DEFAULT_POOL = (
    Fraction(1, 4), Fraction(1, 3), Fraction(1, 2), Fraction(2, 3), Fraction(3, 4), Fraction(1),
)


@dataclass(frozen=True)
class GeneratorParams:
    """``state_count`` includes target and sink (so it is at least 3)."""

    state_count: int = 6
    max_actions: int = 3
    max_branching: int = 3
    minimizer_fraction: float = 0.5
    probability_pool: tuple[Fraction, ...] = DEFAULT_POOL
    seed: int = 0

    def __post_init__(self):
        if self.state_count < 3:
            raise ValueError("state_count must be at least 3 (initial, target, sink)")
        if self.max_actions < 1 or self.max_branching < 1:
            raise ValueError("max_actions and max_branching must be positive")
        if not 0 <= self.minimizer_fraction <= 1:
            raise ValueError("minimizer_fraction must lie in [0, 1]")
        if not self.probability_pool or any(not 0 < p <= 1 for p in self.probability_pool):
            raise ValueError("probability_pool must hold numbers in (0, 1]")


def random_game(params: GeneratorParams) -> StochasticGame:
    """Random game, deterministic in ``params``; validated and preprocessed.

    Regular states are ``s0..s{k-1}`` (``s0`` initial), followed by target
    ``1`` and sink ``0``.  Weights drawn from the pool are renormalised
    exactly.  If ``s0`` cannot reach the target, its first action gets one
    extra edge to the target.
    """
    rng = SplitMix64(params.seed)
    k = params.state_count - 2
    n = params.state_count
    one, zero = k, k + 1
    pool = [Fraction(p) for p in params.probability_pool]
    owners = [MIN if rng.random() < params.minimizer_fraction else MAX for _ in range(k)]
    owners += [MAX, MIN]
    actions: list[list[Action]] = []
    for s in range(k):
        acts = []
        for a in range(1 + rng.below(params.max_actions)):
            branching = 1 + rng.below(min(params.max_branching, n))
            targets: list[int] = []
            while len(targets) < branching:
                t = rng.below(n)
                if t not in targets:
                    targets.append(t)
            weights = [rng.choice(pool) for _ in targets]
            total = sum(weights)
            acts.append(Action(f"a{a}", tuple((t, w / total) for t, w in zip(targets, weights))))
        actions.append(acts)
    actions.append([Action(LOOP, ((one, Fraction(1)),))])
    actions.append([Action(LOOP, ((zero, Fraction(1)),))])

    names = tuple([f"s{i}" for i in range(k)] + ["1", "0"])

    def build() -> StochasticGame:
        return StochasticGame(names, tuple(owners), tuple(tuple(a) for a in actions), 0, one, zero)

    game = build()
    if 0 not in can_reach(game, [one]):
        first = actions[0][0]
        w = rng.choice(pool)
        succ = [(t, p * (1 - w)) for t, p in first.successors if t != one]
        actions[0][0] = Action(first.label, tuple(succ) + ((one, w),)) if w < 1 else Action(
            first.label, ((one, Fraction(1)),)
        )
        game = build()
    return preprocess_merge_unreachable(game)
