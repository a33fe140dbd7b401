import random

import pytest

from stallings import words as W
from stallings.errors import ParseError


def test_parse_basic():
    assert W.parse("ab") == (1, 2)
    assert W.parse("aB") == (1, -2)
    assert W.parse("1") == ()
    assert W.parse("a b\n") == (1, 2)


def test_parse_is_literal():
    # parsing does not reduce; reduction is its own step
    assert W.parse("aA") == (1, -1)
    assert W.free_reduce(W.parse("abBA")) == ()


def test_parse_rank_guard():
    assert W.parse("c", rank=3) == (3,)
    with pytest.raises(ParseError):
        W.parse("c", rank=2)
    with pytest.raises(ParseError):
        W.parse("a?b")


def test_fmt_round_trip():
    for text in ("a", "abAB", "bbA", "1"):
        assert W.fmt(W.parse(text)) == text


def test_fmt_identity():
    assert W.fmt(()) == "1"


def test_free_reduce_fixpoint():
    w = (1, 2, -2, -1, 1)
    assert W.free_reduce(w) == (1,)
    assert W.free_reduce(W.free_reduce(w)) == W.free_reduce(w)


def test_inverse_law():
    w = W.parse("abAB")
    assert W.concat(w, W.inverse(w)) == ()
    assert W.inverse(()) == ()


def test_concat_reduces():
    assert W.concat((1, 2), (-2, 1)) == (1, 1)
    assert W.concat() == ()


def test_conjugate():
    # b a b^-1
    assert W.conjugate((1,), (2,)) == (2, 1, -2)
    assert W.conjugate((1,), ()) == (1,)


def test_random_reduced_is_reduced():
    rng = random.Random(7)
    for _ in range(200):
        w = W.random_reduced(rng, 2, rng.randint(0, 9))
        assert W.free_reduce(w) == w
        assert all(abs(x) in (1, 2) and x != 0 for x in w)
