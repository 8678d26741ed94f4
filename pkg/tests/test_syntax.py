import pytest
from hypothesis import given, settings

from lamupsilon import (
    SHIFT,
    Abs,
    App,
    Closure,
    Index,
    Lift,
    ParseError,
    Rng,
    Slash,
    enumerate_terms,
    parse_term,
    render_subst,
    render_term,
    sample_term,
    size,
)

from conftest import terms


def test_parse_examples():
    assert parse_term("\\0") == Abs(Index(0))
    assert parse_term("(\\\\1) 0") == App(Abs(Abs(Index(1))), Index(0))
    assert parse_term("0[lift(0/)]") == Closure(Index(0), Lift(Slash(Index(0))))


def test_render_examples():
    assert render_term(Abs(Index(0))) == "\\0"
    assert render_term(App(App(Index(0), Index(1)), Index(0))) == "0 1 0"
    assert render_term(Closure(Index(0), SHIFT)) == "0[shift]"


def test_application_grouping():
    # left-associative: explicit grouping only on the right
    assert parse_term("0 1 0") == App(App(Index(0), Index(1)), Index(0))
    assert render_term(App(Index(0), App(Index(1), Index(0)))) == "0 (1 0)"
    assert parse_term("0 (1 0)") == App(Index(0), App(Index(1), Index(0)))


def test_lambda_body_extends_right():
    assert parse_term("\\0 0") == Abs(App(Index(0), Index(0)))
    assert render_term(App(Abs(Index(0)), Index(0))) == "(\\0) 0"


def test_closure_binds_tighter_than_application():
    assert parse_term("0 0[shift]") == App(Index(0), Closure(Index(0), SHIFT))
    chained = parse_term("0[shift][0/]")
    assert chained == Closure(Closure(Index(0), SHIFT), Slash(Index(0)))
    assert render_term(chained) == "0[shift][0/]"


def test_abstraction_under_closure_needs_parentheses():
    t = Closure(Abs(Index(0)), SHIFT)
    assert render_term(t) == "(\\0)[shift]"
    assert parse_term("(\\0)[shift]") == t


def test_slash_takes_a_full_term():
    assert parse_term("0[\\0/]") == Closure(Index(0), Slash(Abs(Index(0))))
    assert parse_term("0[0 1/]") == Closure(Index(0), Slash(App(Index(0), Index(1))))


def test_render_subst():
    assert render_subst(SHIFT) == "shift"
    assert render_subst(Lift(Slash(Abs(Index(0))))) == "lift(\\0/)"


def test_whitespace_is_insignificant_between_tokens():
    assert parse_term(" ( 0 ) [ shift ] ") == Closure(Index(0), SHIFT)
    assert parse_term("0\t1\n0") == parse_term("0 1 0")


def test_round_trip_exhaustive_small_sizes():
    for n in range(1, 9):
        for t in enumerate_terms(n):
            assert parse_term(render_term(t)) == t


def test_round_trip_random_large_terms():
    for i in range(300):
        t = sample_term(150, Rng.derived(12345, i))
        assert parse_term(render_term(t)) == t


@given(terms)
def test_round_trip_arbitrary_terms(t):
    assert parse_term(render_term(t)) == t


@given(terms)
@settings(max_examples=50)
def test_rendering_is_canonical(t):
    # parse o render is the identity, so render o parse fixes its image
    assert render_term(parse_term(render_term(t))) == render_term(t)


@pytest.mark.parametrize(
    "text",
    ["", "0[", "(", "(0", "\\", "lift", "0)", "0 x", "0[lift(shift]", "0[0]", "01a"],
)
def test_malformed_inputs_raise(text):
    with pytest.raises(ParseError):
        parse_term(text)


def test_parse_error_carries_offset_and_expectations():
    with pytest.raises(ParseError) as info:
        parse_term("0[")
    assert info.value.offset == 2
    assert info.value.expected
    with pytest.raises(ParseError) as info:
        parse_term("0 @")
    assert info.value.offset == 2


def test_parse_error_on_trailing_garbage():
    with pytest.raises(ParseError) as info:
        parse_term("0)")
    assert info.value.offset == 1


def test_leading_zeros_read_as_decimal():
    assert parse_term("007") == Index(7)


def test_rendered_terms_have_exact_size():
    for i in range(50):
        t = sample_term(40, Rng.derived(5150, i))
        assert size(parse_term(render_term(t))) == 40


def test_moderately_deep_nesting_parses():
    deep = Index(0)
    for _ in range(400):
        deep = Abs(deep)
    assert parse_term(render_term(deep)) == deep
    wrapped = parse_term("(" * 150 + "0" + ")" * 150)
    assert wrapped == Index(0)
    lifted = parse_term("0[" + "lift(" * 200 + "shift" + ")" * 200 + "]")
    assert size(lifted) == 203  # closure + index + 200 lifts + shift
