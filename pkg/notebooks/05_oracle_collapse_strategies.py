"""The exact oracle, collapsing simple end components, and strategies.

Run: python3 notebooks/05_oracle_collapse_strategies.py
"""

from ssgbvi import collapse_sec, extract_strategies, find_msec, serialize_model, solve_bvi
from ssgbvi.fixtures import builtin_game, fig3
from ssgbvi.oracle import certify_sec, check_bounds, solve_exact, strategy_count, strategy_value
from ssgbvi.model import MAX, MIN

g = fig3()
print("strategy pairs:", strategy_count(g, MAX) * strategy_count(g, MIN))
v = solve_exact(g)
print("V:", {n: str(x) for n, x in zip(g.names, v)})
print("max-min == min-max:", v == solve_exact(g, order="minmax"))

# A component certified simple by the oracle can be merged into one state.
sec = next(ec for ec in find_msec(g, v) if not ec.states & {g.target, g.sink})
print("certified:", sorted(sec.names(g)), certify_sec(g, sec, v))
c = collapse_sec(g, sec, certified=True)
print(serialize_model(c))
print("values after collapse:", {n: str(x) for n, x in zip(c.names, solve_exact(c))})

mdp = builtin_game("fig2-mdp")
print("fig2 collapse matches the drawn result:",
      collapse_sec(mdp, {0, 1}, certified=True) == builtin_game("fig2-collapsed"))

# Strategies read off the final bounds, and what they guarantee.
r = solve_bvi(g, epsilon=1e-9)
sigma, tau = extract_strategies(g, r.bounds)
print("Maximizer:", sigma.labels(g), "Minimizer:", tau.labels(g))
print("sigma guarantees:", strategy_value(g, sigma.choice)[g.initial])
print("bounds consistent with oracle:", check_bounds(g, r.bounds, v).ok)
