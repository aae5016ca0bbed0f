import random

import pytest
from hypothesis import given, strategies as st

from coxstar.diagram import StarSystem
from coxstar.sampling import tits_variant
from coxstar.words import (
    INFINITY,
    GroupElement,
    WordError,
    centralizer_generators,
    commutes_with,
    cyclically_reduce,
    delta_letters,
    delta_word,
    from_letters,
    invert,
    make_delta,
    multiply,
    order,
    parity,
    parity_of_letters,
    parse_word,
    tits_oracle_equal,
    tits_reduce,
)

S = StarSystem.of(3, 4)


def el(*letters, sys=S):
    return from_letters(sys, letters)


@st.composite
def system_and_words(draw, count=2, max_len=10):
    labels = draw(st.lists(st.integers(2, 7), min_size=2, max_size=4))
    sys = StarSystem(tuple(labels))
    words = [tuple(draw(st.lists(st.integers(0, sys.n), max_size=max_len))) for _ in range(count)]
    return sys, words


# --- frozen examples -------------------------------------------------------------------


def test_from_letters_examples():
    assert el(0, 0).is_identity()
    assert el(0, 1, 0, 1, 0, 1).is_identity()
    assert el(1, 0, 1, 0, 1) == el(0)


def test_multiply_invert_examples():
    assert multiply(el(1), el(1)).is_identity()
    assert multiply(el(1, 2), el(2, 1)).is_identity()
    d2 = make_delta(S, 2)
    assert d2 * el(2) == el(2) * d2 == el(0, 2, 0)
    assert invert(GroupElement.identity(S)).is_identity()
    assert invert(el(0, 1)) == el(0, 1) ** 2
    assert invert(el(1, 2)) == el(2, 1)


def test_make_delta_examples():
    assert make_delta(S, 1) == el(1, 0, 1)
    assert make_delta(S, 2) == el(0, 2, 0, 2)
    assert make_delta(StarSystem.of(2, 3), 1) == from_letters(StarSystem.of(2, 3), [0, 1])


def test_cyclically_reduce_examples():
    core, x = cyclically_reduce(el(1, 2, 1))
    assert core == el(2) and x == el(1)
    core, x = cyclically_reduce(el(0))
    assert core == el(0) and x.is_identity()
    core, x = cyclically_reduce(el(1, 2))
    assert core == el(1, 2) and x.is_identity()


def test_order_examples():
    assert order(el(0, 1)) == 3
    assert order(el(1, 2)) == INFINITY
    assert order(GroupElement.identity(S)) == 1
    assert order(el(0, 2)) == 4 and order(el(2)) == 2


def test_parity_examples():
    assert parity(el(0)).bits == (1, 0)
    assert parity(el(1, 0, 1)).bits == (1, 0)
    assert parity(make_delta(S, 2)).bits == (0, 0)


def test_commutes_examples():
    d2 = make_delta(S, 2)
    assert commutes_with(el(0), d2) and commutes_with(el(2), d2)
    assert not commutes_with(el(0), el(1))


def test_centralizer_examples():
    assert centralizer_generators(S, 1) == [el(1)]
    assert centralizer_generators(S, 2) == [el(2), el(0, 2, 0, 2)]
    assert centralizer_generators(S, 0) == [el(0), el(0, 2, 0, 2)]


def test_oracle_examples():
    assert tits_oracle_equal(S, [0, 1, 0], [1, 0, 1]) is True
    assert tits_oracle_equal(S, [1, 2], [2, 1]) is False
    assert tits_oracle_equal(S, [], []) is True
    assert tits_reduce(S, [0, 1, 0, 1, 0, 1, 2, 2]) == ()


def test_oracle_budget_inconclusive():
    sys = StarSystem.of(7, 7)
    assert tits_oracle_equal(sys, [0, 1] * 7, [], budget=1) is None


def test_parse_word_and_errors():
    assert parse_word(S, "s0 s1 s0") == el(0, 1, 0)
    assert parse_word(S, "1") == parse_word(S, "") == GroupElement.identity(S)
    for bad in ["s3", "x1", "s-1"]:
        with pytest.raises(WordError):
            parse_word(S, bad)
    with pytest.raises(WordError):
        from_letters(S, [5])


def test_delta_letters():
    sys = StarSystem.of(4, 6, 3)
    w = delta_word(sys, [1, 2, 1])
    assert delta_letters(w) == (False, (1, 2, 1))
    assert delta_letters(GroupElement.gen(sys, 0) * w) == (True, (1, 2, 1))
    assert delta_letters(GroupElement.gen(sys, 3)) is None


# --- properties ---------------------------------------------------------------------------


@given(system_and_words(count=3))
def test_group_axioms(data):
    sys, (u, v, w) = data
    a, b, c = (from_letters(sys, x) for x in (u, v, w))
    assert (a * b) * c == a * (b * c)
    assert (a * ~a).is_identity() and (~a * a).is_identity()
    assert a * GroupElement.identity(sys) == a
    assert ~(a * b) == ~b * ~a


@given(system_and_words(count=1))
def test_normal_form_is_canonical(data):
    sys, (u,) = data
    a = from_letters(sys, u)
    # rendering is a word for the same element, and never longer than the input
    assert from_letters(sys, a.letters()) == a
    assert len(a.letters()) <= len(u)
    assert from_letters(sys, a.letters()).letters() == a.letters()


@given(system_and_words(count=1, max_len=7))
def test_letters_are_geodesic(data):
    sys, (u,) = data
    a = from_letters(sys, u)
    red = tits_reduce(sys, u)
    assert red is not None and len(red) == len(a.letters())


@given(system_and_words(count=1), st.integers(0, 10_000))
def test_tits_variant_is_equal(data, seed):
    sys, (u,) = data
    v = tits_variant(random.Random(seed), sys, u, 8, 14)
    assert from_letters(sys, u) == from_letters(sys, v)


@given(system_and_words(count=1))
def test_cyclic_reduction(data):
    sys, (u,) = data
    a = from_letters(sys, u)
    core, x = cyclically_reduce(a)
    assert x * core * ~x == a
    assert order(core) == order(a)
    if len(core.syllables) >= 2:
        assert core.syllables[0][0] != core.syllables[-1][0]


@given(system_and_words(count=1, max_len=8))
def test_order_is_exact(data):
    sys, (u,) = data
    a = from_letters(sys, u)
    k = order(a)
    if k == INFINITY:
        assert not any((a ** e).is_identity() for e in range(1, 13))
    else:
        assert (a ** k).is_identity()
        assert not any((a ** e).is_identity() for e in range(1, k))


@given(system_and_words(count=2))
def test_parity_is_a_homomorphism(data):
    sys, (u, v) = data
    a, b = from_letters(sys, u), from_letters(sys, v)
    assert parity(a * b) == parity(a) + parity(b)
    assert parity(a) == parity_of_letters(sys, u)


@given(system_and_words(count=2))
def test_conjugate_generators_share_parity(data):
    sys, (u, _) = data
    x = from_letters(sys, u)
    for i in range(sys.rank):
        g = GroupElement.gen(sys, i)
        assert parity(g.conj(x)) == parity(g)


@given(system_and_words(count=1))
def test_centralizer_generators_commute(data):
    sys, _ = data
    for i in range(sys.rank):
        g = GroupElement.gen(sys, i)
        for c in centralizer_generators(sys, i):
            assert commutes_with(g, c)
