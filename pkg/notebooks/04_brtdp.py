"""Simulation-guided BRTDP: certified bounds while touching few states.

Run: python3 notebooks/04_brtdp.py
"""

import statistics

from ssgbvi import solve_brtdp, solve_bvi
from ssgbvi.fixtures import fig3, skewed
from ssgbvi.oracle import solve_exact

# Minimizer can lose immediately at s0; the long chain is irrelevant.
big = skewed(100_000)
runs = [solve_brtdp(big, seed=i) for i in range(20)]
print("skewed(100000): states", big.n_states)
print("  median explored:", statistics.median(r.explored_states for r in runs))
print("  median trials:", statistics.median(r.iterations for r in runs))
print("  bounds:", runs[0].lower, runs[0].upper)

# On a game with a bloated end component, BRTDP deflates within visited states.
g = fig3()
print("fig3 oracle:", solve_exact(g)[g.initial])
r = solve_brtdp(g, seed=3, trace=True)
for trial, visited, lo, hi in r.trace[:6]:
    print(f"  trial {trial}: visited={visited} L={lo:.6f} U={hi:.6f}")
print(f"  converged after {r.iterations} trials, {r.deflate_calls} deflations")

# Weighting successors by their bound gap is available as an option.
w = solve_brtdp(g, seed=3, weighted=True)
print(f"weighted: {w.iterations} trials, [{w.lower:.7f}, {w.upper:.7f}]")
print("synchronous bvi for comparison:", solve_bvi(g).iterations, "iterations")
