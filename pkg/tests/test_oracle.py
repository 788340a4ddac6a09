from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from ssgbvi.fixtures import builtin_game, fig3, skewed
from ssgbvi.model import MAX, make_game
from ssgbvi.oracle import (
    BudgetExceeded,
    certify_sec,
    chain_reach,
    check_bounds,
    mc_reach_prob,
    solve_exact,
    strategy_count,
    strategy_value,
)
from ssgbvi.solve import Bounds

import bruteforce
from conftest import oracle_values, seeded_game

F = Fraction


def test_mc_reach_prob_geometric():
    chain = make_game(
        states=[("s", MAX), ("1", MAX), ("0", MAX)],
        actions={
            "s": [("x", [("s", F(1, 2)), ("1", F(1, 4)), ("0", F(1, 4))])],
            "1": [("loop", [("1", 1)])],
            "0": [("loop", [("0", 1)])],
        },
        initial="s",
        target="1",
        sink="0",
    )
    assert mc_reach_prob(chain) == [F(1, 2), F(1), F(0)]
    assert mc_reach_prob(chain, "0") == [F(1, 2), F(0), F(1)]


def test_mc_reach_prob_requires_single_actions():
    with pytest.raises(ValueError):
        mc_reach_prob(builtin_game("fig1"))


def test_chain_reach_takes_least_solution():
    g = builtin_game("fig2-mdp")
    # s <-> t forever: the equations x = x have many solutions, the value is 0
    stay = [0, g.action_index("t", "b"), 0, 0]
    assert chain_reach(g, stay)[g.initial] == 0


@pytest.mark.parametrize(
    "alpha, beta, vp",
    [(F(3, 10), F(6, 10), F(3, 10)), (F(7, 10), F(2, 10), F(1, 5)), (F(0), F(1), F(0))],
)
def test_fig3_family(alpha, beta, vp):
    # Minimizer at p chooses the cheaper of q's and r's exits
    g = fig3(alpha, beta)
    assert solve_exact(g)[g.state("p")] == vp


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10_000))
def test_oracle_satisfies_bellman(seed):
    g = seeded_game(seed)
    assert bruteforce.bellman_residual_zero(g, list(oracle_values(seed)))


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10_000))
def test_maxmin_equals_minmax(seed):
    g = seeded_game(seed, 6)
    assert solve_exact(g, order="maxmin") == solve_exact(g, order="minmax")


def test_bad_order():
    with pytest.raises(ValueError):
        solve_exact(builtin_game("fig1"), order="sideways")


def test_budget():
    g = skewed(3)
    assert strategy_count(g, MAX) == 1
    big = seeded_game(5, 7)
    with pytest.raises(BudgetExceeded) as info:
        solve_exact(big, budget=1)
    assert info.value.required > 1


def test_strategy_value_fig1():
    g = builtin_game("fig1")
    q = g.state("q")
    assert strategy_value(g, {q: g.action_index("q", "c")})[g.initial] == F(1, 2)
    assert strategy_value(g, {q: g.action_index("q", "b")})[g.initial] == 0


def test_certify_sec_examples():
    g = builtin_game("fig2-mdp")
    v = solve_exact(g)
    assert certify_sec(g, {0, 1}, v)
    g3 = fig3()
    v3 = solve_exact(g3)
    assert certify_sec(g3, {g3.state("p"), g3.state("q")}, v3)
    assert not certify_sec(g3, {g3.state(n) for n in "pqr"}, v3)


def test_check_bounds():
    g = builtin_game("fig1")
    v = solve_exact(g)
    good = Bounds(np.array([0.4, 0.5, 1.0, 0.0]), np.array([0.6, 0.5, 1.0, 0.0]))
    assert check_bounds(g, good, v).ok
    bad = Bounds(np.array([0.55, 0.0, 1.0, 0.0]), np.array([1.0, 0.4, 1.0, 0.0]))
    report = check_bounds(g, bad, v)
    assert [x.state for x in report.violations] == ["p", "q"]
    assert len(report) == 2
