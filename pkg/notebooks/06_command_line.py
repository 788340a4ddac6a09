"""Driving the command-line tool from Python (same as running `ssgbvi ...`).

Run: python3 notebooks/06_command_line.py
"""

import os
import tempfile

from ssgbvi.cli import run

with tempfile.TemporaryDirectory() as tmp:
    model = os.path.join(tmp, "g.sg")
    trace = os.path.join(tmp, "trace.csv")
    print("exit", run(["gen", "--states", "7", "--seed", "5", "-o", model]))
    print("exit", run(["validate", model]))
    print("exit", run(["solve", model, "--method", "bvi", "--oracle-check", "--trace", trace]))
    with open(trace) as fh:
        print("".join(fh.readlines()[:4]))
    # exit code 2: the iteration budget ran out before the bounds met
    print("exit", run(["solve", "fig2-mdp", "--method", "bvi-naive", "--max-iters", "1000", "--no-timing"]))
    print("exit", run(["bench", "fig1", "fig3:3/10,6/10", "--methods", "bvi,brtdp", "--reps", "5"]))
