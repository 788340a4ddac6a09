from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from ssgbvi.fixtures import FIG1, builtin_game, builtin_text
from ssgbvi.generator import GeneratorParams, random_game
from ssgbvi.model import ValidationError
from ssgbvi.modelfile import ParseError, load_model, parse_model, parse_probability, save_model, serialize_model


@pytest.mark.parametrize(
    "token, value",
    [("1/3", Fraction(1, 3)), ("0.25", Fraction(1, 4)), ("1", Fraction(1)), ("0", Fraction(0))],
)
def test_parse_probability(token, value):
    assert parse_probability(token) == value


@pytest.mark.parametrize("token", ["1/0", "abc", "-0.5", "0.1234567890123456789"])
def test_parse_probability_rejects(token):
    with pytest.raises((ParseError, ValueError)):
        parse_probability(token)


def test_one_third_stays_exact():
    g = parse_model(FIG1)
    q = g.state("q")
    probs = [p for _, p in g.actions[q][g.action_index("q", "c")].successors]
    assert probs == [Fraction(1, 3)] * 3
    assert sum(probs) == 1


def test_fig1_structure():
    g = parse_model(FIG1)
    assert g.names == ("p", "q", "1", "0")
    assert str(g.owners[g.state("p")]) == "min"
    # target and sink get synthesized self-loops
    assert [a.label for a in g.actions[g.target]] == ["loop"]
    assert g.actions[g.sink][0].successors == ((g.sink, Fraction(1)),)


HEADER = "sg v1\nstate s max\nstate 1 max\nstate 0 min\ninit s\ntarget 1\nsink 0\n"


@pytest.mark.parametrize(
    "body, fragment, line",
    [
        ("act s a\n  -> 1 3/2\n", "probability out of range", 9),
        ("act s a\n  -> 1 1\nact s a\n  -> 0 1\n", "duplicate action", 10),
        ("act s a\n  -> 1 1/2\n  -> 1 1/2\n", "duplicate successor", 10),
        ("act s a\n  -> nowhere 1\n", "unknown state", 9),
        ("act s a\n", "act block without transitions", 8),
        ("act s a\n  -> 1 1\nact 1 x\n  -> 1 1\n", "cannot have actions", 10),
    ],
)
def test_positioned_parse_errors(body, fragment, line):
    with pytest.raises(ParseError) as info:
        parse_model(HEADER + body)
    assert fragment in str(info.value)
    assert info.value.line == line


def test_mass_error_is_validation_error():
    with pytest.raises(ValidationError):
        parse_model(HEADER + "act s a\n  -> 1 1/2\n")


def test_missing_header_rejected():
    with pytest.raises(ParseError):
        parse_model("state s max\n")


@pytest.mark.parametrize("name", ["fig1", "fig2-mdp", "fig2-collapsed", "fig6"])
def test_builtin_round_trip(name):
    g = builtin_game(name)
    text = serialize_model(g)
    assert parse_model(text) == g
    assert serialize_model(parse_model(text)) == text


def test_crlf_and_comments_accepted():
    text = builtin_text("fig1").replace("\n", "\r\n")
    assert parse_model(text) == parse_model(FIG1)


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_random_round_trip(seed):
    g = random_game(GeneratorParams(state_count=50, max_actions=3, seed=seed))
    assert parse_model(serialize_model(g)) == g


def test_save_and_load(tmp_path):
    g = builtin_game("fig3")
    path = tmp_path / "fig3.sg"
    save_model(g, path)
    assert path.read_bytes().count(b"\r") == 0
    assert load_model(path) == g
