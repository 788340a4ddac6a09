"""Command-line driver: validate, solve, gen, builtin, bench."""

from __future__ import annotations

import argparse
import csv
import io
import os
import statistics
import sys
from fractions import Fraction
from typing import Sequence

from . import __version__
from .brtdp import DEFAULT_MAX_TRIALS, solve_brtdp
from .fixtures import NAMES as BUILTINS
from .fixtures import UnknownBuiltin, builtin_game, parse_builtin_ref
from .generator import GeneratorParams, random_game
from .model import StochasticGame, ValidationError, validate_game
from .modelfile import ParseError, parse_model, serialize_model
from .oracle import DEFAULT_BUDGET, BudgetExceeded, solve_exact
from .solve import DEFAULT_MAX_ITERS, SolveReport, solve_bvi, solve_naive_bvi, solve_vi_classic

METHODS = ("vi", "bvi-naive", "bvi", "brtdp")

EXIT_OK, EXIT_ERROR, EXIT_LIMIT = 0, 1, 2

BVI_TRACE_HEADER = ("iter", "L_init", "U_init", "gap", "deflate_calls")
BRTDP_TRACE_HEADER = ("trial", "visited", "L_init", "U_init")


class UsageError(Exception):
    pass


def fmt(x: float) -> str:
    return f"{x:.12g}"


def load_game(ref: str) -> StochasticGame:
    """A path to an ``sg v1`` file, or a builtin such as ``fig3:3/10,6/10``."""
    if os.path.exists(ref):
        with open(ref, encoding="utf-8") as fh:
            return parse_model(fh.read())
    name, params = parse_builtin_ref(ref)
    if name in BUILTINS:
        return builtin_game(name, *params)
    raise FileNotFoundError(f"no such model file or builtin: {ref}")


def run_method(game: StochasticGame, method: str, epsilon: float, *, deflate_every: int = 1,
               max_iters: int = DEFAULT_MAX_ITERS, max_trials: int = DEFAULT_MAX_TRIALS,
               seed: int = 0, trace: bool = False, check_all: bool = False,
               weighted: bool = False) -> SolveReport:
    if method == "vi":
        return solve_vi_classic(game, epsilon, max_iters, trace=trace)
    if method == "bvi-naive":
        return solve_naive_bvi(game, epsilon, max_iters, check_all=check_all, trace=trace)
    if method == "bvi":
        return solve_bvi(game, epsilon, deflate_every, max_iters, check_all=check_all, trace=trace)
    if method == "brtdp":
        return solve_brtdp(game, epsilon, seed, max_trials, weighted=weighted, trace=trace)
    raise UsageError(f"unknown method {method!r}")


def summary_line(report: SolveReport, timing: bool = True) -> str:
    fields = [
        ("method", report.method),
        ("iterations", str(report.iterations)),
        ("L", fmt(report.lower)),
        ("U", fmt(report.upper)),
        ("gap", fmt(report.upper - report.lower)),
    ]
    if timing:
        fields.append(("time_ms", fmt(report.wall_time * 1000)))
    fields += [
        ("explored", str(report.explored_states)),
        ("msecs", str(report.msec_count_last)),
        ("deflates", str(report.deflate_calls)),
        ("status", report.status),
    ]
    return " ".join(f"{k}={v}" for k, v in fields)


def trace_csv(report: SolveReport) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    if report.method == "brtdp":
        w.writerow(BRTDP_TRACE_HEADER)
        for trial, visited, lo, hi in report.trace or ():
            w.writerow((trial, visited, fmt(lo), fmt(hi)))
    else:
        w.writerow(BVI_TRACE_HEADER)
        for it, lo, hi, gap, calls in report.trace or ():
            w.writerow((it, fmt(lo), fmt(hi), fmt(gap), calls))
    return buf.getvalue()


def exit_code(report: SolveReport) -> int:
    return EXIT_OK if report.status in ("converged", "stopped") else EXIT_LIMIT


def _positive_float(text: str) -> float:
    x = float(text)
    if not x > 0:
        raise argparse.ArgumentTypeError("must be > 0")
    return x


def _positive_int(text: str) -> int:
    x = int(text)
    if x < 1:
        raise argparse.ArgumentTypeError("must be >= 1")
    return x


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="ssgbvi", description="Guaranteed-precision reachability for stochastic games.")
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    v = sub.add_parser("validate", help="check a model file")
    v.add_argument("model")

    s = sub.add_parser("solve", help="solve a model")
    s.add_argument("model")
    s.add_argument("--method", choices=METHODS, default="bvi")
    s.add_argument("--epsilon", type=_positive_float, default=1e-6)
    s.add_argument("--deflate-every", type=_positive_int, default=1)
    s.add_argument("--max-iters", type=_positive_int, default=DEFAULT_MAX_ITERS)
    s.add_argument("--max-trials", type=_positive_int, default=DEFAULT_MAX_TRIALS)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--weighted", action="store_true",
                   help="BRTDP: weight successors by their bound gap")
    s.add_argument("--check-all", action="store_true",
                   help="require the gap to close at every state, not just the initial one")
    s.add_argument("--trace", metavar="PATH")
    s.add_argument("--oracle-check", action="store_true")
    s.add_argument("--oracle-budget", type=_positive_int, default=DEFAULT_BUDGET)
    s.add_argument("--no-timing", action="store_true", help="omit time_ms from the summary line")

    g = sub.add_parser("gen", help="write a random game")
    g.add_argument("--states", type=int, required=True)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--max-actions", type=_positive_int, default=3)
    g.add_argument("--max-branching", type=_positive_int, default=3)
    g.add_argument("--minimizer-fraction", type=float, default=0.5)
    g.add_argument("-o", "--output", required=True)

    b = sub.add_parser("builtin", help="write a builtin game")
    b.add_argument("name", choices=BUILTINS)
    b.add_argument("params", nargs="*")
    b.add_argument("-o", "--output", required=True)

    bench = sub.add_parser("bench", help="median timings over repetitions, as CSV")
    bench.add_argument("models", nargs="+")
    bench.add_argument("--methods", default="bvi,brtdp")
    bench.add_argument("--reps", type=_positive_int, default=20)
    bench.add_argument("--epsilon", type=_positive_float, default=1e-6)
    bench.add_argument("--seed", type=int, default=0)
    bench.add_argument("--deflate-every", type=_positive_int, default=1)
    bench.add_argument("--max-iters", type=_positive_int, default=DEFAULT_MAX_ITERS)
    bench.add_argument("--max-trials", type=_positive_int, default=DEFAULT_MAX_TRIALS)
    bench.add_argument("-o", "--output")
    return p


def _write(path: str, text: str) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)


def cmd_validate(args, out) -> int:
    game = load_game(args.model)
    report = validate_game(game)
    for v in report:
        print(v.message, file=out)
    print(f"ok: {game.n_states} states", file=out)
    return EXIT_OK


def cmd_solve(args, out) -> int:
    game = load_game(args.model)
    oracle = None
    if args.oracle_check:
        try:
            oracle = solve_exact(game, args.oracle_budget)
        except BudgetExceeded as exc:
            raise UsageError(f"--oracle-check refused: {exc}") from None
    report = run_method(
        game, args.method, args.epsilon,
        deflate_every=args.deflate_every, max_iters=args.max_iters,
        max_trials=args.max_trials, seed=args.seed, trace=bool(args.trace),
        check_all=args.check_all, weighted=args.weighted,
    )
    s0 = game.names[game.initial]
    print(f"model: {args.model} ({game.n_states} states, initial {s0})", file=out)
    print(f"method: {report.method}  status: {report.status}  iterations: {report.iterations}", file=out)
    print(f"L({s0}) = {fmt(report.lower)}", file=out)
    print(f"U({s0}) = {fmt(report.upper)}", file=out)
    code = exit_code(report)
    if oracle is not None:
        v0 = oracle[game.initial]
        ok = report.lower <= float(v0) + 1e-9 and float(v0) - 1e-9 <= report.upper
        print(f"oracle V({s0}) = {v0} ({fmt(float(v0))}): {'pass' if ok else 'FAIL'}", file=out)
        if not ok:
            code = EXIT_ERROR
    if args.trace:
        _write(args.trace, trace_csv(report))
    print(summary_line(report, timing=not args.no_timing), file=out)
    return code


def cmd_gen(args, out) -> int:
    params = GeneratorParams(
        state_count=args.states, max_actions=args.max_actions,
        max_branching=args.max_branching, minimizer_fraction=args.minimizer_fraction,
        seed=args.seed,
    )
    game = random_game(params)
    _write(args.output, serialize_model(game))
    print(f"wrote {args.output} ({game.n_states} states)", file=out)
    return EXIT_OK


def cmd_builtin(args, out) -> int:
    game = builtin_game(args.name, *args.params)
    _write(args.output, serialize_model(game))
    print(f"wrote {args.output} ({game.n_states} states)", file=out)
    return EXIT_OK


BENCH_HEADER = ("model", "method", "reps", "status", "median_time_ms", "iterations",
                "explored", "msecs", "L", "U")


def bench(models: Sequence[str], methods: Sequence[str], reps: int, epsilon: float,
          seed: int = 0, **kwargs) -> list[tuple]:
    """One row per (model, method); BRTDP repetition ``i`` uses seed ``seed + i``."""
    rows = []
    for ref in models:
        try:
            game = load_game(ref)
        except Exception as exc:  # recorded, not fatal
            rows.extend((ref, m, reps, f"error: {exc}", "", "", "", "", "", "") for m in methods)
            continue
        for method in methods:
            reports = []
            try:
                for i in range(reps):
                    reports.append(run_method(game, method, epsilon, seed=seed + i, **kwargs))
            except Exception as exc:
                rows.append((ref, method, reps, f"error: {exc}", "", "", "", "", "", ""))
                continue
            done = sum(exit_code(r) == EXIT_OK for r in reports)
            status = "converged" if done == reps else f"limit {reps - done}/{reps}"
            rows.append((
                ref, method, reps, status,
                fmt(statistics.median(r.wall_time * 1000 for r in reports)),
                fmt(statistics.median(r.iterations for r in reports)),
                fmt(statistics.median(r.explored_states for r in reports)),
                fmt(statistics.median(r.msec_count_last for r in reports)),
                fmt(statistics.median(r.lower for r in reports)),
                fmt(statistics.median(r.upper for r in reports)),
            ))
    return rows


def bench_csv(rows: Sequence[tuple]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(BENCH_HEADER)
    w.writerows(rows)
    return buf.getvalue()


def cmd_bench(args, out) -> int:
    methods = [m.strip() for m in args.methods.split(",") if m.strip()]
    for m in methods:
        if m not in METHODS:
            raise UsageError(f"unknown method {m!r}")
    rows = bench(args.models, methods, args.reps, args.epsilon, args.seed,
                 deflate_every=args.deflate_every, max_iters=args.max_iters,
                 max_trials=args.max_trials)
    text = bench_csv(rows)
    if args.output:
        _write(args.output, text)
    out.write(text)
    return EXIT_OK


COMMANDS = {
    "validate": cmd_validate,
    "solve": cmd_solve,
    "gen": cmd_gen,
    "builtin": cmd_builtin,
    "bench": cmd_bench,
}


def run(argv: Sequence[str] | None = None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    try:
        args = build_parser().parse_args(argv)
        return COMMANDS[args.command](args, out)
    except SystemExit as exc:  # --help / --version
        return int(exc.code or 0)
    except (UsageError, ParseError, ValidationError, UnknownBuiltin, OSError, ValueError) as exc:
        print(f"error: {exc}", file=err)
        return EXIT_ERROR


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
