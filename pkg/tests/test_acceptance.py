"""The twelve acceptance criteria, one test each.

Every test prints a single ``[criterion N] PASS|FAIL ...`` line straight to
the terminal (outside pytest's capture) before asserting.
"""

import io
import itertools
import random
import statistics
from fractions import Fraction

import numpy as np
import pytest

from ssgbvi.brtdp import solve_brtdp
from ssgbvi.cli import run, summary_line, trace_csv
from ssgbvi.fixtures import builtin_game, fig3, skewed, vi_trap
from ssgbvi.graph import find_msec
from ssgbvi.oracle import certify_sec, solve_exact
from ssgbvi.solve import (
    bellman_update,
    bvi_iterates,
    collapse_sec,
    deflate,
    solve_bvi,
    solve_naive_bvi,
    solve_vi_classic,
)

import bruteforce
from conftest import oracle_values, seeded_game

F = Fraction
VI_TRAP_N = 14


@pytest.fixture
def verdict(capsys):
    def emit(n: int, ok: bool, detail: str) -> None:
        with capsys.disabled():
            print(f"\n[criterion {n:2d}] {'PASS' if ok else 'FAIL'} {detail}")
        assert ok, detail

    return emit


def cli(*argv):
    out, err = io.StringIO(), io.StringIO()
    return run(list(argv), out, err), out.getvalue()


def test_c01_golden_iterates(verdict):
    g = builtin_game("fig2-collapsed")
    want = [(F(1, 3), F(2, 3)), (F(4, 9), F(5, 9)), (F(13, 27), F(14, 27))]
    lo, hi = [F(0), F(1), F(0)], [F(1), F(1), F(0)]
    exact = []
    for _ in range(3):
        lo, hi = bellman_update(g, lo), bellman_update(g, hi)
        exact.append((lo[0], hi[0]))
    floats = [(it.bounds.lower[0], it.bounds.upper[0]) for it in itertools.islice(bvi_iterates(g), 3)]
    err = max(abs(float(w) - x) for pair_w, pair_x in zip(want, floats) for w, x in zip(pair_w, pair_x))
    verdict(1, exact == want and err <= 1e-12, f"exact={exact == want} float_err={err:.2e}")


def test_c02_naive_non_convergence(verdict):
    g = builtin_game("fig2-mdp")
    r = solve_naive_bvi(g, max_iters=1000)
    s, t = g.state("s"), g.state("t")
    code, _ = cli("solve", "fig2-mdp", "--method", "bvi-naive", "--max-iters", "1000")
    ok = (
        r.iterations == 1000
        and r.bounds.upper[s] == 1.0
        and r.bounds.upper[t] == 1.0
        and r.upper - r.lower >= 0.5
        and code == 2
    )
    verdict(2, ok, f"U(s)={r.bounds.upper[s]} U(t)={r.bounds.upper[t]} gap={r.upper - r.lower:.4f} exit={code}")


def test_c03_deflating_convergence(verdict):
    r = solve_bvi(builtin_game("fig2-mdp"), epsilon=1e-6)
    ok = r.converged and r.lower <= 0.5 <= r.upper and r.upper - r.lower < 1e-6 and r.iterations <= 200
    verdict(3, ok, f"[{r.lower:.9f}, {r.upper:.9f}] in {r.iterations} iterations")


def test_c04_bec_stall_vs_deflation(verdict):
    g = fig3(F(3, 10), F(6, 10))
    p = g.state("p")
    stalled = all(it.bounds.upper[p] == 1.0 for it in itertools.islice(bvi_iterates(g, None), 1000))
    r = solve_bvi(g, epsilon=1e-6)
    code, out = cli("solve", "fig3:3/10,6/10", "--oracle-check")
    ok = stalled and r.converged and abs(r.lower - 0.3) <= 1e-6 and abs(r.upper - 0.3) <= 1e-6
    ok = ok and code == 0 and ": pass" in out
    verdict(4, ok, f"naive U(p)=1 for 1000 iterations: {stalled}; bvi [{r.lower:.9f}, {r.upper:.9f}]; oracle-check exit {code}")


def test_c05_converging_ec_control(verdict):
    g = builtin_game("fig6")
    v = solve_exact(g)
    r = solve_naive_bvi(g, epsilon=1e-6, check_all=True)
    worst = max(
        max(float(v[s]) - r.bounds.lower[s], r.bounds.upper[s] - float(v[s])) for s in range(g.n_states)
    )
    verdict(5, r.converged and worst < 1e-6, f"naive converged={r.converged} in {r.iterations}, max distance to V {worst:.2e}")


def test_c06_oracle_equivalence(verdict):
    worst, bad_bounds, unconverged = 0.0, 0, 0
    for seed in range(200):
        g = seeded_game(seed, 7, 3)
        exact = oracle_values(seed, 7, 3)
        v = np.array([float(x) for x in exact])
        s0 = g.initial
        done = False
        for it in itertools.islice(bvi_iterates(g), 10**6):
            b = it.bounds
            if np.any(b.lower > v + 1e-12) or np.any(b.upper < v - 1e-12):
                bad_bounds += 1
                break
            if b.upper[s0] - b.lower[s0] < 1e-8:
                done = True
                worst = max(worst, abs((b.lower[s0] + b.upper[s0]) / 2 - v[s0]))
                break
        unconverged += not done
    ok = worst <= 1e-6 and bad_bounds == 0 and unconverged == 0
    verdict(6, ok, f"200 games: max |mid - V| = {worst:.2e}, bound violations {bad_bounds}, unconverged {unconverged}")


def test_c07_find_msec(verdict):
    mismatches = 0
    for seed in range(100):
        g = seeded_game(seed, 6, 3)
        v = list(oracle_values(seed, 6, 3))
        found = {ec.states for ec in find_msec(g, v)} - {frozenset({g.target})}
        mismatches += found != bruteforce.msecs(g, v)
    verdict(7, mismatches == 0, f"100 games, {mismatches} mismatches against brute force")


def test_c08_deflate_soundness(verdict):
    rng = random.Random(8)
    triples = violations = 0
    seed = 0
    while triples < 1000:
        g = seeded_game(seed, 6, 3)
        v = list(oracle_values(seed, 6, 3))
        seed += 1
        ecs = [T for T in bruteforce.all_ecs(g) if not T & {g.target, g.sink}]
        for T in rng.sample(ecs, min(3, len(ecs))):
            f = [x + (1 - x) * F(rng.randint(0, 10), 10) for x in v]
            f[g.sink] = F(0)
            out = deflate(g, T, f)
            triples += 1
            violations += any(out[s] < v[s] for s in range(g.n_states))
    verdict(8, violations == 0, f"{triples} triples from {seed} games, {violations} violations")


def test_c09_collapse_equivalence(verdict):
    g = builtin_game("fig2-mdp")
    structural = collapse_sec(g, {g.state("s"), g.state("t")}, certified=True) == builtin_game("fig2-collapsed")
    checked = broken = 0
    seed = 0
    while checked < 50 and seed < 20_000:
        g = seeded_game(seed, 6, 3)
        v = list(oracle_values(seed, 6, 3))
        seed += 1
        secs = [ec for ec in find_msec(g, v) if not ec.states & {g.target, g.sink}]
        if not secs or not certify_sec(g, secs[0], v):
            continue
        ec = secs[0]
        c = collapse_sec(g, ec, certified=True)
        w = solve_exact(c)
        rep = c.names[min(ec.states)]
        same = w[c.state(rep)] == v[min(ec.states)] and all(
            w[c.state(name)] == v[s] for s, name in enumerate(g.names) if s not in ec.states
        )
        checked += 1
        broken += not same
    ok = structural and checked == 50 and broken == 0
    verdict(9, ok, f"structural={structural}; {checked} certified SECs collapsed, {broken} value changes")


def test_c10_brtdp_partial_exploration(verdict):
    big = skewed(100_000)
    runs = [solve_brtdp(big, epsilon=1e-6, seed=i) for i in range(20)]
    frac = statistics.median(r.explored_states for r in runs) / big.n_states
    skew_ok = statistics.median(r.converged for r in runs) == 1 and frac < 0.05
    small_ok = True
    for g in (builtin_game("fig1"), fig3(F(3, 10), F(6, 10))):
        v = float(solve_exact(g)[g.initial])
        for i in range(20):
            r = solve_brtdp(g, epsilon=1e-6, seed=i)
            small_ok &= r.converged and r.lower - 1e-6 <= v <= r.upper + 1e-6
    verdict(10, skew_ok and small_ok, f"skewed: median explored fraction {frac:.2e}; fig1/fig3 all 20 runs ok: {small_ok}")


def test_c11_classic_vi_failure(verdict):
    g = vi_trap(VI_TRAP_N)
    v = float(solve_exact(g)[g.initial])
    vi = solve_vi_classic(g, delta=1e-6)
    err = abs(v - vi.lower)
    r = solve_bvi(g, epsilon=1e-6)
    ok = vi.status == "stopped" and err > 0.01 and r.converged and r.lower <= v <= r.upper
    verdict(11, ok, f"vi-trap({VI_TRAP_N}): VI stops at {vi.iterations} with error {err:.4f}; bvi gap {r.upper - r.lower:.1e} after {r.iterations}")


def test_c12_determinism(verdict):
    games = [("fig3", fig3()), ("fig6", builtin_game("fig6")), ("random", seeded_game(42, 7, 3))]
    methods = {
        "vi": lambda g: solve_vi_classic(g, trace=True),
        "bvi-naive": lambda g: solve_naive_bvi(g, max_iters=300, trace=True),
        "bvi": lambda g: solve_bvi(g, trace=True),
        "brtdp": lambda g: solve_brtdp(g, seed=7, trace=True),
    }
    differ = []
    for (gname, g), (mname, solve) in itertools.product(games, methods.items()):
        a, b = solve(g), solve(g)
        if summary_line(a, timing=False) != summary_line(b, timing=False) or trace_csv(a) != trace_csv(b):
            differ.append(f"{gname}/{mname}")
    # and through the CLI, twice
    outs = [cli("solve", "fig3", "--method", "brtdp", "--seed", "5", "--no-timing")[1] for _ in range(2)]
    if outs[0] != outs[1]:
        differ.append("cli")
    verdict(12, not differ, f"{len(games) * len(methods)} solver runs and the CLI repeated; differing: {differ or 'none'}")
