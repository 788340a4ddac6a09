"""End components: why plain bounded iteration stalls, and how they are found.

Run: python3 notebooks/02_end_components.py
"""

import numpy as np

from ssgbvi import best_exit, find_msec, is_bec, mec_decomposition
from ssgbvi.fixtures import builtin_game, fig3
from ssgbvi.model import MAX, MIN
from ssgbvi.oracle import solve_exact

g = fig3()
print("states:", g.names)
for ec in mec_decomposition(g):
    print("MEC", sorted(ec.names(g)))

# With U = 1 everywhere (the initial upper bound), Minimizer has no exit from
# {p, q, r}: min over nothing is 1, above Maximizer's best exit. U = 1 is a fixpoint.
core = {g.state(n) for n in "pqr"}
u = np.array([1.0, 1.0, 1.0, 1.0, 0.0])
print("exit max:", best_exit(g, core, u, MAX).value, "exit min:", best_exit(g, core, u, MIN).value)
print("bloated under U=1:", is_bec(g, core, u))

# Given the true value, removing Minimizer's suboptimal actions leaves exactly
# the maximal simple end components (plus the target singleton, never simple).
v = solve_exact(g)
print("V =", dict(zip(g.names, map(str, v))))
for ec in find_msec(g, v):
    print("candidate", sorted(ec.names(g)))

# In fig6 Minimizer can leave, and the cycle is not bloated at its value.
g6 = builtin_game("fig6")
print("fig6 bloated under V:", is_bec(g6, {g6.state(n) for n in "ABCD"}, solve_exact(g6)))
