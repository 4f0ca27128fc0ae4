import pytest
from hypothesis import given, settings, strategies as st

from kaplansky.ordinal import (
    INF, OMEGA, ONE, ZERO, Cmp, Kind, Ordinal, OrdinalError, classify, format_ordinal, fundamental_sequence,
    is_limit, limit_split, ord_add, ord_compare, ord_succ, parse_height, parse_ordinal,
)

w = OMEGA


def P(text):
    return parse_ordinal(text)


def test_addition_examples():
    assert ord_add(1, w) == w
    assert ord_add(w, 1) == P("w+1")
    assert ord_compare(w, P("w+1")) is Cmp.LT
    assert ord_add(P("w*2+3"), P("w^2")) == P("w^2")


def test_classify_examples():
    assert classify(0) == (Kind.ZERO, None)
    assert classify(P("w+4")) == (Kind.SUCCESSOR, P("w+3"))
    assert classify(P("w^2")) == (Kind.LIMIT, None)


def test_limit_split_examples():
    assert limit_split(w) == (w, 0)
    assert limit_split(P("w*2+5")) == (P("w*2"), 5)
    assert limit_split(P("w^w+1")) == (P("w^w"), 1)
    with pytest.raises(OrdinalError):
        limit_split(Ordinal.of(3))


def test_fundamental_sequence_examples():
    assert [fundamental_sequence(w, m) for m in range(4)] == [Ordinal.of(m) for m in range(4)]
    assert fundamental_sequence(P("w^2"), 3) == P("w*3")
    assert fundamental_sequence(P("w^2+w"), 2) == P("w^2+2")
    with pytest.raises(OrdinalError):
        fundamental_sequence(P("w+1"), 0)


def test_text_forms():
    for text in ["0", "7", "w", "w*2+3", "w^w+1", "w^(w+1)*2", "w^2+w"]:
        assert format_ordinal(P(text)) == text
    assert format_ordinal(INF) == "inf"
    assert parse_height("inf") is INF
    with pytest.raises(OrdinalError):
        parse_ordinal("w^")


def test_infinity_is_above_everything():
    assert P("w^(w^w)") < INF
    assert not INF < P("w")
    assert max([P("w"), INF]) is INF


def ordinals(depth=2):
    leaf = st.integers(0, 4).map(Ordinal.of)
    if depth == 0:
        return leaf

    def build(terms):
        out = ZERO
        for e, c in terms:
            out = out + Ordinal.omega_power(e, c)
        return out

    return st.one_of(leaf, st.lists(st.tuples(ordinals(depth - 1), st.integers(1, 3)), max_size=3).map(build))


@settings(max_examples=200, deadline=None)
@given(ordinals(), ordinals(), ordinals())
def test_addition_associative(a, b, c):
    assert (a + b) + c == a + (b + c)


@settings(max_examples=200, deadline=None)
@given(ordinals(), ordinals())
def test_total_order_and_monotone_right(a, b):
    assert (a < b) + (a == b) + (b < a) == 1
    assert a <= a + b
    assert b <= a + b


@settings(max_examples=200, deadline=None)
@given(ordinals())
def test_successor(a):
    s = ord_succ(a)
    assert a < s
    assert classify(s) == (Kind.SUCCESSOR, a)


@settings(max_examples=200, deadline=None)
@given(ordinals())
def test_limit_split_recomposes(a):
    if a.is_finite():
        return
    d, l = limit_split(a)
    assert is_limit(d) and ord_add(d, l) == a


@settings(max_examples=100, deadline=None)
@given(ordinals())
def test_fundamental_sequences_increase_below(a):
    if not is_limit(a):
        return
    seq = [fundamental_sequence(a, m) for m in range(51)]
    assert all(x < y for x, y in zip(seq, seq[1:]))
    assert all(x < a for x in seq)


@settings(max_examples=200, deadline=None)
@given(ordinals(3))
def test_text_round_trip(a):
    assert parse_ordinal(format_ordinal(a)) == a
