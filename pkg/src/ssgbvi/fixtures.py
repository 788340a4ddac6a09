"""Builtin games: the worked examples plus two scalable stress shapes."""

from __future__ import annotations

from fractions import Fraction

from .model import LOOP, MAX, MIN, Action, StochasticGame, preprocess_merge_unreachable
from .modelfile import parse_model


class UnknownBuiltin(KeyError):
    pass


FIG1 = """\
sg v1
# p is Minimizer, q Maximizer; q's action c stays/wins/loses with 1/3 each
state p min
state q max
state 1 max
state 0 min
init p
target 1
sink 0
act p a
  -> q 1
act q b
  -> p 1
act q c
  -> q 1/3
  -> 1 1/3
  -> 0 1/3
"""

FIG2_MDP = """\
sg v1
state s max
state t max
state 1 max
state 0 max
init s
target 1
sink 0
act s a
  -> t 1
act t b
  -> s 1
act t c
  -> t 1/3
  -> 1 1/3
  -> 0 1/3
"""

FIG2_COLLAPSED = """\
sg v1
state st max
state 1 max
state 0 max
init st
target 1
sink 0
act st c
  -> st 1/3
  -> 1 1/3
  -> 0 1/3
"""

# A and C belong to Maximizer, B and D to Minimizer.  Each state either moves
# on around the cycle or leaves: half the mass to an outside value (0.8, 0.3,
# 0.4, 0.5), half to the next state.  Outside values are probabilistic branches
# to target/sink.
FIG6 = """\
sg v1
state A max
state B min
state C max
state D min
state 1 max
state 0 min
init A
target 1
sink 0
act A stay
  -> B 1
act A leave
  -> 1 2/5
  -> 0 1/10
  -> B 1/2
act B stay
  -> C 1
act B leave
  -> 1 3/20
  -> 0 7/20
  -> C 1/2
act C stay
  -> D 1
act C leave
  -> 1 1/5
  -> 0 3/10
  -> D 1/2
act D stay
  -> A 1
act D leave
  -> 1 1/4
  -> 0 1/4
  -> A 1/2
"""


def _branch(p: Fraction, one: int, zero: int) -> tuple[tuple[int, Fraction], ...]:
    return tuple((t, q) for t, q in ((one, p), (zero, 1 - p)) if q > 0)


def fig3(alpha=Fraction(3, 10), beta=Fraction(6, 10)) -> StochasticGame:
    """Three-state end component {p, q, r}; q exits with value alpha, r with beta."""
    alpha, beta = Fraction(alpha), Fraction(beta)
    if not (0 <= alpha <= 1 and 0 <= beta <= 1):
        raise ValueError("alpha and beta must lie in [0, 1]")
    p, q, r, one, zero = range(5)
    d = lambda t: ((t, Fraction(1)),)  # noqa: E731
    actions = (
        (Action("a", d(q)), Action("c", d(r))),
        (Action("b", d(p)), Action("e", _branch(alpha, one, zero))),
        (Action("d", d(p)), Action("f", _branch(beta, one, zero))),
        (Action(LOOP, d(one)),),
        (Action(LOOP, d(zero)),),
    )
    game = StochasticGame(("p", "q", "r", "1", "0"), (MIN, MAX, MAX, MAX, MIN), actions, p, one, zero)
    return preprocess_merge_unreachable(game)


def skewed(n: int) -> StochasticGame:
    """Minimizer start with a direct losing move and a move into an ``n``-state chain to target."""
    if n < 1:
        raise ValueError("chain length must be positive")
    one, zero = n + 1, n + 2
    names = ["s0"] + [f"c{i}" for i in range(1, n + 1)] + ["1", "0"]
    owners = [MIN] + [MAX] * n + [MAX, MIN]
    actions = [(Action("lose", ((zero, Fraction(1)),)), Action("enter", ((1, Fraction(1)),)))]
    for i in range(1, n + 1):
        nxt = i + 1 if i < n else one
        actions.append((Action("next", ((nxt, Fraction(1)),)),))
    actions.append((Action(LOOP, ((one, Fraction(1)),)),))
    actions.append((Action(LOOP, ((zero, Fraction(1)),)),))
    return StochasticGame(tuple(names), tuple(owners), tuple(actions), 0, one, zero)


def vi_trap(n: int) -> StochasticGame:
    """Chain s1..sn, each step advances or restarts with 1/2; sn is a fair coin to target/sink.

    Every state has value 1/2, but lower iteration creeps up so slowly that
    the small-change stopping rule fires far below it.
    """
    if n < 1:
        raise ValueError("chain length must be positive")
    half = Fraction(1, 2)
    one, zero = n, n + 1
    names = [f"s{i}" for i in range(1, n + 1)] + ["1", "0"]
    actions = []
    for i in range(n - 1):
        actions.append((Action("go", ((i + 1, half), (0, half))),))
    actions.append((Action("flip", ((one, half), (zero, half))),))
    actions.append((Action(LOOP, ((one, Fraction(1)),)),))
    actions.append((Action(LOOP, ((zero, Fraction(1)),)),))
    owners = [MAX] * n + [MAX, MIN]
    return StochasticGame(tuple(names), tuple(owners), tuple(actions), 0, one, zero)


_TEXT = {"fig1": FIG1, "fig2-mdp": FIG2_MDP, "fig2-collapsed": FIG2_COLLAPSED, "fig6": FIG6}
NAMES = ("fig1", "fig2-mdp", "fig2-collapsed", "fig3", "fig6", "skewed", "vi-trap")


def builtin_game(name: str, *params) -> StochasticGame:
    """Look up a builtin by name; fig3 takes (alpha, beta), skewed and vi-trap a size."""
    if name in _TEXT:
        if params:
            raise ValueError(f"{name} takes no parameters")
        return parse_model(_TEXT[name])
    if name == "fig3":
        return fig3(*(Fraction(p) for p in params))
    if name == "skewed":
        return skewed(*(int(p) for p in params)) if params else skewed(10)
    if name == "vi-trap":
        return vi_trap(*(int(p) for p in params)) if params else vi_trap(14)
    raise UnknownBuiltin(name)


def builtin_text(name: str) -> str:
    return _TEXT[name]


def parse_builtin_ref(ref: str) -> tuple[str, list[str]]:
    """Split ``name`` or ``name:p1,p2`` into the name and parameter strings."""
    name, _, rest = ref.partition(":")
    return name, [p for p in rest.split(",") if p] if rest else []


def is_builtin_ref(ref: str) -> bool:
    return parse_builtin_ref(ref)[0] in NAMES
