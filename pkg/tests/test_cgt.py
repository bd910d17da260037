from fractions import Fraction

import pytest

import oracles
from domineering.cgt import (DyadicRational, GameStore, GameSyntaxError, Outcome, Relation,
                             format_game, simplest_between)


@pytest.fixture
def store():
    return GameStore()


# dyadic rationals ------------------------------------------------------------

def test_dyadic_normalizes_and_orders():
    half = DyadicRational(2, 2)
    assert half == DyadicRational(1, 1)
    assert str(half) == "1/2"
    assert str(DyadicRational(-7, 1)) == "-7/2"
    assert DyadicRational.parse("-3/4") < DyadicRational.parse("-1/2") < DyadicRational(0)
    assert DyadicRational.parse("5/8") + DyadicRational.parse("3/8") == DyadicRational(1)
    assert DyadicRational.parse("-5/2").floor() == -3
    assert DyadicRational.parse("-5/2").ceil() == -2


def test_dyadic_rejects_other_denominators():
    with pytest.raises(ValueError):
        DyadicRational.parse("1/3")


@pytest.mark.parametrize("lo,hi,want", [
    (None, None, "0"), ("0", None, "1"), (None, "-2", "-3"), ("1/2", "1", "3/4"),
    ("-1", "2", "0"), ("1", "2", "3/2"), ("3/8", "3/4", "1/2"), ("2", "7", "3"),
])
def test_simplest_between(lo, hi, want):
    parse = lambda x: None if x is None else DyadicRational.parse(x)
    assert str(simplest_between(parse(lo), parse(hi))) == want


# canonical forms ---------------------------------------------------------------

def test_numbers_are_canonical(store):
    assert store.game([store.number(0)], [store.number(1)]) is store.number(DyadicRational(1, 1))
    assert store.game([store.number(-1)], [store.number(3)]) is store.zero
    assert store.game([store.zero], []) is store.number(1)
    assert store.game([], []) is store.zero


def test_star_and_up(store):
    star = store.game([store.zero], [store.zero])
    up = store.game([store.zero], [star])
    assert format_game(star) == "{0|0}"
    assert store.add(star, star) is store.zero
    assert store.compare(star, store.zero) is Relation.CONFUSED
    assert store.compare(up, store.zero) is Relation.GREATER
    assert store.outcome(star) is Outcome.FIRST


def test_dominated_options_removed(store):
    g = store.game([store.number(1), store.number(2)], [store.number(5), store.number(3)])
    # a number anyway: simplest between 2 and 3
    assert g is store.number(DyadicRational(5, 1))
    sw = store.game([store.number(3), store.number(2)], [store.number(-1), store.number(0)])
    assert format_game(sw) == "{3|-1}"


def test_reversible_option_bypassed(store):
    # {2|0} reverses through its right option 0, which has no left options
    assert store.game([store.parse("{2|0}")], []) is store.zero
    # {2|1} reverses through 1, leaving {0|} = 1
    assert store.game([store.parse("{2|1}")], []) is store.number(1)


@pytest.mark.parametrize("text", [
    "0", "-3", "5/8", "{0|0}", "{1|-1}", "{3|3/2||1|-1/2|||-1}", "{1|||1/2|-1||-3/2|-7/2}",
    "{3/2|0||-1/2|-5/2}", "{0|-1}", "{2|0||-1/2|-2|||-5/2}",
])
def test_parse_format_roundtrip(store, text):
    assert format_game(store.parse(text)) == text


def test_slash_binding(store):
    # more bars bind more loosely
    a = store.parse("{1|0||-1}")
    b = store.game([store.parse("{1|0}")], [store.number(-1)])
    assert a is b
    c = store.parse("{1||0|-1}")
    assert c is store.game([store.number(1)], [store.parse("{0|-1}")])


@pytest.mark.parametrize("text", ["{", "{1|", "1/3", "{1|2}}", "{a|b}", "{1||2|||3}x"])
def test_parse_errors(store, text):
    with pytest.raises(GameSyntaxError):
        store.parse(text)


def test_multiply_and_negate(store):
    g = store.parse("{1|-1}")
    assert store.multiply_int(2, g) is store.add(g, g)
    assert store.multiply_int(-3, g) is store.neg(store.multiply_int(3, g))
    assert store.multiply_int(0, g) is store.zero


def test_comparison_matches_definition(store):
    texts = ["0", "1", "-1/2", "{0|0}", "{1|-1}", "{0|-1}", "{2|1/2}", "{1|0||-1}", "{1/2|-3}"]
    games = [store.parse(t) for t in texts]
    for g in games:
        for h in games:
            want = oracles.form_le(oracles.form_of_game(g), oracles.form_of_game(h))
            assert store.le(g, h) is want, (format_game(g), format_game(h))


def test_numbers_match_simplest_forms(store):
    for x in ["0", "3/4", "-5/2", "7/8", "2"]:
        g = store.number(DyadicRational.parse(x))
        f = oracles.form_of_number(Fraction(x))
        gf = oracles.form_of_game(g)
        assert oracles.form_le(f, gf) and oracles.form_le(gf, f)
