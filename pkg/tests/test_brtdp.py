import statistics
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from ssgbvi.brtdp import (
    ExplorationState,
    SimulationPath,
    best_actions,
    deflate_visited,
    simulate_path,
    solve_brtdp,
    update_along_path,
)
from ssgbvi.fixtures import builtin_game, fig3, skewed
from ssgbvi.oracle import solve_exact
from ssgbvi.solve import Bounds, initial_bounds

from conftest import oracle_values, seeded_game


def test_best_actions_by_player():
    g = fig3()
    b = initial_bounds(g)
    b.upper[g.state("r")] = 0.5
    b.lower[g.state("r")] = 0.4
    p = g.state("p")
    # Minimizer picks by lower bound: q has L=0, r has L=0.4
    assert best_actions(g, b, p) == [g.action_index("p", "a")]
    q = g.state("q")
    assert best_actions(g, b, q) == [g.action_index("q", "b")]


def test_best_actions_ties_returned_in_order():
    g = builtin_game("fig1")
    b = initial_bounds(g)
    assert best_actions(g, b, g.state("q")) == [0]
    b.upper[g.state("q")] = 0.6
    b.upper[g.state("p")] = 0.6
    b.lower[g.target] = 1.0
    # U(q,b) = 0.6, U(q,c) = (0.6 + 1 + 0) / 3
    assert best_actions(g, b, g.state("q")) == [g.action_index("q", "b")]


def test_update_along_path_collapsed():
    g = builtin_game("fig2-collapsed")
    ex = ExplorationState.fresh(g, 0)
    path = SimulationPath([0, g.target], [0])
    update_along_path(g, path, ex.bounds)
    assert ex.bounds.lower[0] == pytest.approx(1 / 3)
    assert ex.bounds.upper[0] == pytest.approx(2 / 3)
    assert ex.bounds.lower[g.target] == 1.0


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10_000), st.integers(0, 2**32), st.booleans())
def test_paths_are_legal(gseed, seed, weighted):
    g = seeded_game(gseed)
    ex = ExplorationState.fresh(g, seed)
    for _ in range(5):
        k = ex.step_bound()
        path = simulate_path(g, ex, k, weighted=weighted)
        assert path.states[0] == g.initial
        assert 1 <= len(path) <= k
        assert len(path.actions) == len(path) - 1
        for (s, a), t in zip(path.steps, path.states[1:]):
            assert t in g.actions[s][a].targets
        assert set(path.states) <= ex.visited
        update_along_path(g, path, ex.bounds)


def test_step_bound_counts_successors():
    g = builtin_game("fig1")
    ex = ExplorationState.fresh(g, 0)
    # p visited, q known
    assert ex.step_bound() == 4


def test_simulation_stops_at_target_and_sink():
    g = builtin_game("fig2-collapsed")
    ex = ExplorationState.fresh(g, 3)
    for _ in range(20):
        path = simulate_path(g, ex, 1000)
        assert path.final in (g.target, g.sink)


@pytest.mark.parametrize("seed", range(5))
def test_deterministic_per_seed(seed):
    g = seeded_game(11, 7)
    a = solve_brtdp(g, seed=seed, trace=True)
    b = solve_brtdp(g, seed=seed, trace=True)
    assert a.trace == b.trace and a.iterations == b.iterations
    assert np.array_equal(a.bounds.lower, b.bounds.lower)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10_000), st.integers(0, 1000), st.booleans())
def test_sound_after_every_trial(gseed, seed, weighted):
    g = seeded_game(gseed)
    v = np.array([float(x) for x in oracle_values(gseed)])
    last = {}

    def check(trial, ex, path):
        b = ex.bounds
        assert np.all(b.lower <= v + 1e-12) and np.all(v <= b.upper + 1e-12)
        if last:
            assert np.all(b.lower >= last["lo"]) and np.all(b.upper <= last["hi"])
        last["lo"], last["hi"] = b.lower.copy(), b.upper.copy()

    r = solve_brtdp(g, epsilon=1e-8, seed=seed, weighted=weighted, on_trial=check)
    assert r.converged
    assert r.lower <= v[g.initial] + 1e-12 <= r.upper + 2e-12


def test_deflate_visited_ignores_frontier():
    g = fig3()
    ex = ExplorationState.fresh(g, 0)
    calls, _ = deflate_visited(g, ex)
    assert calls == 0
    assert ex.bounds.upper[g.state("q")] == 1.0


def test_skewed_explores_little():
    g = skewed(2000)
    r = solve_brtdp(g, seed=1)
    assert r.converged and r.upper < 1e-6
    assert r.explored_states < 0.05 * g.n_states


def test_fig3_median_over_seeds():
    g = fig3()
    runs = [solve_brtdp(g, seed=i) for i in range(20)]
    assert all(r.converged for r in runs)
    mid = statistics.median((r.lower + r.upper) / 2 for r in runs)
    assert mid == pytest.approx(0.3, abs=1e-6)


def test_weighted_mode_converges():
    g = builtin_game("fig6")
    v = float(solve_exact(g)[g.initial])
    r = solve_brtdp(g, seed=4, weighted=True)
    assert r.converged and r.lower <= v <= r.upper


def test_brtdp_bad_epsilon():
    with pytest.raises(ValueError):
        solve_brtdp(builtin_game("fig1"), epsilon=0)
