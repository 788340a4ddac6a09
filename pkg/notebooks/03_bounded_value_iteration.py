"""Bounded value iteration with and without deflation, and plain VI's blind spot.

Run: python3 notebooks/03_bounded_value_iteration.py  (about 10 seconds)
"""

import itertools
from fractions import Fraction

from ssgbvi import bellman_update, solve_bvi, solve_naive_bvi, solve_vi_classic
from ssgbvi.fixtures import builtin_game, vi_trap
from ssgbvi.oracle import solve_exact
from ssgbvi.solve import bvi_iterates

# The collapsed two-state example, by hand in exact arithmetic.
g = builtin_game("fig2-collapsed")
lo, hi = [Fraction(0), Fraction(1), Fraction(0)], [Fraction(1), Fraction(1), Fraction(0)]
for i in range(1, 4):
    lo, hi = bellman_update(g, lo), bellman_update(g, hi)
    print(f"iterate {i}: L={lo[0]}  U={hi[0]}")

# Uncollapsed, U never leaves 1 without deflation.
mdp = builtin_game("fig2-mdp")
naive = solve_naive_bvi(mdp, max_iters=1000)
print(f"naive: status={naive.status} L={naive.lower:.6f} U={naive.upper}")
bvi = solve_bvi(mdp, trace=True)
print(f"deflating: status={bvi.status} [{bvi.lower:.8f}, {bvi.upper:.8f}] after {bvi.iterations} iterations")
for row in bvi.trace[:4]:
    print("  iter=%d L=%.6f U=%.6f gap=%.6f deflates=%d" % row)

# Every iterate brackets the value: the solver is anytime.
v = float(solve_exact(mdp)[mdp.initial])
print("all iterates bracket V:", all(
    it.bounds.lower[0] <= v <= it.bounds.upper[0] for it in itertools.islice(bvi_iterates(mdp), 50)
))

# Classic VI stops when progress is slow, not when it is close.
trap = vi_trap(14)
v_trap = float(solve_exact(trap)[trap.initial])
vi = solve_vi_classic(trap, delta=1e-6)
print(f"vi-trap(14): V={v_trap}, VI stopped at {vi.lower:.5f} (error {v_trap - vi.lower:.4f})")
cert = solve_bvi(trap, epsilon=1e-6)
print(f"bvi certifies [{cert.lower:.7f}, {cert.upper:.7f}] after {cert.iterations} iterations")
