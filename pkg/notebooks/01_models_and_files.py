"""Building games, reading and writing the text format, random instances.

Run: python3 notebooks/01_models_and_files.py
"""

from fractions import Fraction

from ssgbvi import GeneratorParams, make_game, parse_model, random_game, serialize_model, validate_game
from ssgbvi.fixtures import FIG1
from ssgbvi.model import MAX, MIN

# A game in the text format. Probabilities stay exact: 1/3 is a Fraction, not 0.333.
g = parse_model(FIG1)
print(g.names, [str(o) for o in g.owners])
q = g.state("q")
print("q:c ->", [(g.names[t], str(p)) for t, p in g.actions[q][g.action_index("q", "c")].successors])

# The same game built in code. Target and sink need their self-loops spelled out here.
h = make_game(
    states=[("p", MIN), ("q", MAX), ("1", MAX), ("0", MIN)],
    actions={
        "p": [("a", [("q", 1)])],
        "q": [("b", [("p", 1)]), ("c", [("q", Fraction(1, 3)), ("1", Fraction(1, 3)), ("0", Fraction(1, 3))])],
        "1": [("loop", [("1", 1)])],
        "0": [("loop", [("0", 1)])],
    },
    initial="p",
    target="1",
    sink="0",
)
print("same game:", h == g)

# Validation collects every structural problem rather than stopping at the first.
broken = make_game(
    states=[("s", MAX), ("1", MAX), ("0", MIN)],
    actions={"s": [("a", [("1", Fraction(1, 2))])], "1": [("loop", [("0", 1)])], "0": [("loop", [("0", 1)])]},
    initial="s",
    target="1",
    sink="0",
)
for v in validate_game(broken):
    print("violation:", v.message)

# Seeded random games are reproducible and serialize canonically.
r = random_game(GeneratorParams(state_count=6, seed=2024))
text = serialize_model(r)
print(text)
print("round trip exact:", parse_model(text) == r)
