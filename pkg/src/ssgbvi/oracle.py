"""Brute-force exact values by enumerating deterministic memoryless strategies.

Every strategy pair induces a Markov chain whose reachability probabilities are
obtained by exact rational Gaussian elimination.  No floating point is used.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .graph import EndComponent, best_exit
from .model import MAX, MIN, Player, StochasticGame

DEFAULT_BUDGET = 10**6


class BudgetExceeded(RuntimeError):
    def __init__(self, required: int, budget: int) -> None:
        self.required = required
        self.budget = budget
        super().__init__(f"{required} strategy pairs needed, budget is {budget}")


class SingularSystem(ArithmeticError):
    pass


def _solve_linear(a: list[list[Fraction]], b: list[Fraction]) -> list[Fraction]:
    n = len(b)
    a = [row[:] + [rhs] for row, rhs in zip(a, b)]
    for col in range(n):
        pivot = next((r for r in range(col, n) if a[r][col] != 0), None)
        if pivot is None:
            raise SingularSystem(f"no pivot in column {col}")
        a[col], a[pivot] = a[pivot], a[col]
        prow = a[col]
        inv = 1 / prow[col]
        for r in range(n):
            if r == col:
                continue
            factor = a[r][col]
            if factor:
                factor *= inv
                row = a[r]
                for c in range(col, n + 1):
                    if prow[c]:
                        row[c] -= factor * prow[c]
    return [a[i][n] / a[i][i] for i in range(n)]


def chain_reach(game: StochasticGame, choice: Sequence[int], target: int | None = None) -> list[Fraction]:
    """Exact probability of reaching ``target`` when state ``s`` always plays ``choice[s]``."""
    if target is None:
        target = game.target
    n = game.n_states
    dist = [game.actions[s][choice[s]].successors for s in range(n)]
    # states with a path to target; everything else is 0 (least solution)
    preds: list[list[int]] = [[] for _ in range(n)]
    for s in range(n):
        for t, _ in dist[s]:
            preds[t].append(s)
    alive = {target}
    stack = [target]
    while stack:
        t = stack.pop()
        for s in preds[t]:
            if s not in alive:
                alive.add(s)
                stack.append(s)
    unknown = [s for s in range(n) if s in alive and s != target]
    pos = {s: i for i, s in enumerate(unknown)}
    m = len(unknown)
    a = [[Fraction(0)] * m for _ in range(m)]
    b = [Fraction(0)] * m
    for s in unknown:
        i = pos[s]
        a[i][i] += 1
        for t, p in dist[s]:
            if t == target:
                b[i] += p
            elif t in pos:
                a[i][pos[t]] -= p
    # every unknown state reaches target, so the chain restricted to them is
    # transient and I - P is nonsingular
    x = _solve_linear(a, b) if m else []
    out = [Fraction(0)] * n
    out[target] = Fraction(1)
    for s, i in pos.items():
        out[s] = x[i]
    return out


def mc_reach_prob(chain: StochasticGame, target: int | str | None = None) -> list[Fraction]:
    """Reachability probabilities of a game in which every state has exactly one action."""
    if any(len(acts) != 1 for acts in chain.actions):
        raise ValueError("mc_reach_prob needs exactly one action per state")
    t = chain.target if target is None else chain.state(target)
    return chain_reach(chain, [0] * chain.n_states, t)


def _choices(game: StochasticGame, player: Player, fixed: Mapping[int, int] | None = None):
    states = [s for s in range(game.n_states) if game.owners[s] is player]
    options = [
        [fixed[s]] if fixed and s in fixed else range(len(game.actions[s])) for s in states
    ]
    for combo in itertools.product(*options):
        yield dict(zip(states, combo))


def strategy_count(game: StochasticGame, player: Player) -> int:
    return math.prod(len(game.actions[s]) for s in range(game.n_states) if game.owners[s] is player)


def pair_values(game: StochasticGame, budget: int = DEFAULT_BUDGET) -> list[list[list[Fraction]]]:
    """Chain values for every (Maximizer, Minimizer) strategy pair, indexed ``[sigma][tau]``."""
    required = strategy_count(game, MAX) * strategy_count(game, MIN)
    if required > budget:
        raise BudgetExceeded(required, budget)
    taus = list(_choices(game, MIN))
    table = []
    for sigma in _choices(game, MAX):
        row = []
        for tau in taus:
            choice = [sigma[s] if s in sigma else tau[s] for s in range(game.n_states)]
            row.append(chain_reach(game, choice))
        table.append(row)
    return table


def solve_exact(game: StochasticGame, budget: int = DEFAULT_BUDGET, order: str = "maxmin") -> list[Fraction]:
    """Exact value of every state: max over sigma of min over tau (or the reverse order)."""
    table = pair_values(game, budget)
    n = game.n_states
    if order == "maxmin":
        return [max(min(col[s] for col in row) for row in table) for s in range(n)]
    if order == "minmax":
        return [
            min(max(table[i][j][s] for i in range(len(table))) for j in range(len(table[0])))
            for s in range(n)
        ]
    raise ValueError(f"unknown order {order!r}")


def strategy_value(game: StochasticGame, sigma: Mapping[int, int], budget: int = DEFAULT_BUDGET) -> list[Fraction]:
    """Value guaranteed by a fixed Maximizer strategy against Minimizer's best response.

    Maximizer states missing from ``sigma`` play their first action.
    """
    required = strategy_count(game, MIN)
    if required > budget:
        raise BudgetExceeded(required, budget)
    best: list[Fraction] | None = None
    for tau in _choices(game, MIN):
        choice = [sigma.get(s, 0) if game.owners[s] is MAX else tau[s] for s in range(game.n_states)]
        x = chain_reach(game, choice)
        best = x if best is None else [min(u, v) for u, v in zip(best, x)]
    return best


def certify_sec(game: StochasticGame, ec: EndComponent | Iterable[int], v: Sequence[Fraction]) -> bool:
    """Simple iff every state's value equals Maximizer's best exit under ``v``."""
    states = ec.states if isinstance(ec, EndComponent) else frozenset(ec)
    cap = best_exit(game, states, v, MAX).value
    return all(v[s] == cap for s in states)


@dataclass(frozen=True)
class BoundViolation:
    state: str
    lower: float
    upper: float
    value: Fraction


@dataclass
class BoundsReport:
    violations: list[BoundViolation] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def __len__(self) -> int:
        return len(self.violations)


def check_bounds(game: StochasticGame, b, v: Sequence[Fraction], tol: float = 1e-9) -> BoundsReport:
    """States where ``L(s) > v(s) + tol`` or ``U(s) < v(s) - tol``."""
    report = BoundsReport()
    for s in range(game.n_states):
        lo, hi, val = float(b.lower[s]), float(b.upper[s]), float(v[s])
        if lo > val + tol or hi < val - tol:
            report.violations.append(BoundViolation(game.names[s], lo, hi, v[s]))
    return report


__all__ = [
    "BudgetExceeded",
    "certify_sec",
    "chain_reach",
    "check_bounds",
    "mc_reach_prob",
    "solve_exact",
    "strategy_value",
]
