"""Reader and writer for the line-oriented ``sg v1`` model format.

Example::

    sg v1
    state p min
    state q max
    state 1 max
    state 0 min
    init p
    target 1
    sink 0
    act p a
      -> q 1
    act q c
      -> q 1/3
      -> 1 1/3
      -> 0 1/3

Probabilities are ``<int>/<int>`` or decimals with at most 18 fractional
digits; both are stored as exact rationals.  Target and sink must not carry
``act`` blocks, their self-loops are implied.
"""

from __future__ import annotations

import re
from fractions import Fraction

from .model import (
    LOOP,
    Action,
    Player,
    StochasticGame,
    ValidationError,
    preprocess_merge_unreachable,
    validate_game,
)

HEADER = "sg v1"

_RATIONAL = re.compile(r"(\d+)/(\d+)")
_DECIMAL = re.compile(r"\d+(?:\.(\d{1,18}))?|\.(\d{1,18})")


class ParseError(ValueError):
    def __init__(self, message: str, line: int, column: int = 1) -> None:
        self.message = message
        self.line = line
        self.column = column
        super().__init__(f"line {line}, column {column}: {message}")


def parse_probability(token: str) -> Fraction:
    """Parse ``a/b`` or a decimal literal into an exact rational (no range check)."""
    m = _RATIONAL.fullmatch(token)
    if m:
        den = int(m.group(2))
        if den == 0:
            raise ValueError("zero denominator")
        return Fraction(int(m.group(1)), den)
    if _DECIMAL.fullmatch(token):
        return Fraction(token)
    raise ValueError(f"malformed probability {token!r}")


def _tokens(line: str) -> list[tuple[str, int]]:
    """Whitespace-separated tokens with their 1-based columns, comments stripped."""
    out = []
    for m in re.finditer(r"\S+", line):
        if m.group().startswith("#"):
            break
        out.append((m.group(), m.start() + 1))
    return out


def parse_model(text: str, preprocess: bool = True) -> StochasticGame:
    """Parse ``sg v1`` text into a validated (and by default preprocessed) game."""
    lines = text.splitlines()
    decl: list[tuple[str, Player]] = []
    index: dict[str, int] = {}
    roles: dict[str, tuple[str, int]] = {}
    blocks: dict[int, list[tuple[str, list[tuple[int, Fraction]], int]]] = {}
    current: list[tuple[int, Fraction]] | None = None
    header_seen = False

    def lookup(name: str, lineno: int, col: int) -> int:
        if name not in index:
            raise ParseError(f"unknown state {name!r}", lineno, col)
        return index[name]

    for lineno, raw in enumerate(lines, start=1):
        toks = _tokens(raw)
        if not toks:
            continue
        word, col = toks[0]
        if not header_seen:
            if [t for t, _ in toks] != HEADER.split():
                raise ParseError(f"expected header {HEADER!r}", lineno, col)
            header_seen = True
            continue
        if word == "->":
            if current is None:
                raise ParseError("transition outside of an act block", lineno, col)
            if not raw[:1].isspace():
                raise ParseError("transition lines must be indented", lineno, col)
            if len(toks) != 3:
                raise ParseError("expected '-> <state> <prob>'", lineno, col)
            (succ, scol), (prob, pcol) = toks[1], toks[2]
            t = lookup(succ, lineno, scol)
            try:
                p = parse_probability(prob)
            except ValueError as exc:
                raise ParseError(str(exc), lineno, pcol) from None
            if not 0 < p <= 1:
                raise ParseError("probability out of range", lineno, pcol)
            if any(u == t for u, _ in current):
                raise ParseError(f"duplicate successor {succ!r}", lineno, scol)
            current.append((t, p))
            continue
        if current is not None and not current:
            raise ParseError("act block without transitions", lineno, col)
        current = None
        if word == "state":
            if len(toks) != 3:
                raise ParseError("expected 'state <name> <max|min>'", lineno, col)
            if blocks or roles:
                raise ParseError("state declarations must precede roles and actions", lineno, col)
            (name, ncol), (owner, ocol) = toks[1], toks[2]
            if name in index:
                raise ParseError(f"duplicate state {name!r}", lineno, ncol)
            if owner not in ("max", "min"):
                raise ParseError(f"owner must be max or min, got {owner!r}", lineno, ocol)
            index[name] = len(decl)
            decl.append((name, Player(owner)))
        elif word in ("init", "target", "sink"):
            if len(toks) != 2:
                raise ParseError(f"expected '{word} <name>'", lineno, col)
            if word in roles:
                raise ParseError(f"duplicate {word} line", lineno, col)
            roles[word] = (toks[1][0], lookup(toks[1][0], lineno, toks[1][1]))
        elif word == "act":
            if len(toks) != 3:
                raise ParseError("expected 'act <state> <label>'", lineno, col)
            (name, ncol), (label, lcol) = toks[1], toks[2]
            s = lookup(name, lineno, ncol)
            block = blocks.setdefault(s, [])
            if any(lab == label for lab, _, _ in block):
                raise ParseError(f"duplicate action {label!r} at {name!r}", lineno, lcol)
            current = []
            block.append((label, current, lineno))
        else:
            raise ParseError(f"unknown directive {word!r}", lineno, col)

    if not header_seen:
        raise ParseError(f"expected header {HEADER!r}", 1)
    if current is not None and not current:
        raise ParseError("act block without transitions", len(lines))
    for role in ("init", "target", "sink"):
        if role not in roles:
            raise ParseError(f"missing '{role}' line", len(lines) or 1)
    target, sink = roles["target"][1], roles["sink"][1]
    for s in (target, sink):
        if s in blocks:
            raise ParseError(f"{decl[s][0]!r} is target or sink and cannot have actions",
                             blocks[s][0][2])

    actions = []
    for s in range(len(decl)):
        if s in (target, sink):
            actions.append((Action(LOOP, ((s, Fraction(1)),)),))
        else:
            actions.append(tuple(Action(label, tuple(succ)) for label, succ, _ in blocks.get(s, [])))
    game = StochasticGame(
        tuple(n for n, _ in decl),
        tuple(o for _, o in decl),
        tuple(actions),
        roles["init"][1],
        target,
        sink,
    )
    report = validate_game(game)
    if not report.ok:
        raise ValidationError(report)
    return preprocess_merge_unreachable(game) if preprocess else game


def serialize_model(game: StochasticGame) -> str:
    """Canonical ``sg v1`` text (LF line endings, probabilities as reduced rationals)."""
    out = [HEADER]
    for name, owner in zip(game.names, game.owners):
        out.append(f"state {name} {owner.value}")
    out.append(f"init {game.names[game.initial]}")
    out.append(f"target {game.names[game.target]}")
    out.append(f"sink {game.names[game.sink]}")
    for s, acts in enumerate(game.actions):
        if s in (game.target, game.sink):
            continue
        for act in acts:
            out.append(f"act {game.names[s]} {act.label}")
            for t, p in act.successors:
                out.append(f"  -> {game.names[t]} {p}")
    return "\n".join(out) + "\n"


def load_model(path) -> StochasticGame:
    with open(path, encoding="utf-8") as fh:
        return parse_model(fh.read())


def save_model(game: StochasticGame, path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(serialize_model(game))
