import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from selfsim.errors import IndexNonzero, NotFullBisection, OverlappingSupport
from selfsim.fullgroup import (
    Transposition,
    ab_image,
    apply,
    canonicalize,
    compose,
    compose_all,
    factor,
    format_table,
    hat,
    identity_table,
    index,
    inverse,
    parse_table,
    random_table,
    table,
)
from selfsim.germs import GermSymbol

seeds = st.integers(0, 2**32)


def T(G, *entries):
    return table(G, entries)


def test_canonicalize_examples(G):
    assert canonicalize(G, T(G, ("0", "e", "0"), ("1", "e", "1"))) == identity_table()
    b = T(G, ("", "b", ""))
    assert canonicalize(G, b) == b
    with pytest.raises(NotFullBisection):
        canonicalize(G, T(G, ("0", "e", "1")))


def test_compose_examples(G):
    a, b = T(G, ("", "a", "")), T(G, ("", "b", ""))
    assert compose(G, a, a) == identity_table()
    assert compose(G, a, b) == T(G, ("", "ab", ""))
    swap = T(G, ("1", "e", "0"), ("0", "e", "1"))
    assert compose(G, swap, swap) == identity_table()


def test_index_examples(G):
    assert index(T(G, ("", "b", ""))) == 1
    assert index(T(G, ("", "a", ""))) == 0
    assert index(T(G, ("1", "e", "0"), ("0", "e", "1"))) == 0
    assert index(identity_table()) == 0


def test_hat_examples(G):
    assert hat(G, ("1", "e", "0")) == T(G, ("1", "e", "0"), ("0", "e", "1"))
    got = hat(G, ("11", "a", "00"))
    assert set(got.entries) == set(T(G, ("11", "a", "00"), ("00", "a", "11"), ("01", "e", "01"),
                                      ("10", "e", "10")).entries)
    with pytest.raises(OverlappingSupport):
        hat(G, ("0", "e", "0"))


def test_factor_examples(G):
    assert factor(G, T(G, ("", "a", ""))) == [Transposition(GermSymbol((1,), (), (0,)))]
    assert factor(G, T(G, ("", "bab", ""))) == [Transposition(GermSymbol((1,), ("b", "a"), (0,)))]
    with pytest.raises(IndexNonzero):
        factor(G, T(G, ("", "b", "")))


def test_ab_image_examples(G):
    assert ab_image(T(G, ("", "b", ""))) == 1
    assert ab_image(identity_table()) == 0


def test_hat_is_an_involution_of_index_zero(G):
    for v in [("1", "e", "0"), ("11", "a", "00"), ("0", "bab", "10"), ("01", "b", "1")]:
        h = hat(G, v)
        assert compose(G, h, h) == identity_table()
        assert index(h) == 0


@given(seeds)
def test_group_laws(G, seed):
    rng = random.Random(seed)
    t1, t2, t3 = (random_table(G, rng, max_depth=3, max_len=4) for _ in range(3))
    assert compose(G, compose(G, t1, t2), t3) == compose(G, t1, compose(G, t2, t3))
    assert compose(G, t1, inverse(G, t1)) == identity_table()
    assert compose(G, identity_table(), t1) == t1
    assert index(compose(G, t1, t2)) == (index(t1) + index(t2)) % 2


@given(seeds)
def test_compose_matches_pointwise_action(G, seed):
    rng = random.Random(seed)
    t1, t2 = (random_table(G, rng, max_depth=3, max_len=4) for _ in range(2))
    c = compose(G, t1, t2)
    for _ in range(10):
        w = tuple(rng.randrange(2) for _ in range(12))
        assert apply(G, c, w) == apply(G, t1, apply(G, t2, w))


@given(seeds)
def test_factorization_round_trip(G, seed):
    rng = random.Random(seed)
    t = random_table(G, rng, index_value=0)
    fs = factor(G, t)
    assert compose_all(G, [f.table(G) for f in fs]) == t
    assert all(index(f.table(G)) == 0 for f in fs)


def test_two_hundred_round_trips(G):
    rng = random.Random(0)
    for _ in range(200):
        t = random_table(G, rng, index_value=0)
        assert compose_all(G, [f.table(G) for f in factor(G, t)]) == t


@given(seeds)
def test_exactness_of_index(G, seed):
    # index zero is exactly the subgroup the transpositions generate
    rng = random.Random(seed)
    t = random_table(G, rng)
    if index(t):
        with pytest.raises(IndexNonzero):
            factor(G, t)
    else:
        factor(G, t)


def test_products_of_transpositions_have_index_zero(G):
    rng = random.Random(3)
    pool = [f for _ in range(10) for f in factor(G, random_table(G, rng, index_value=0))]
    for _ in range(20):
        picks = rng.sample(pool, min(5, len(pool)))
        assert ab_image(compose_all(G, [p.table(G) for p in picks])) == 0


def test_parse_and_format(G):
    t = parse_table(G, "alpha=1 g=e beta=0  # swap\nalpha=0 g=e beta=1\n")
    assert t == T(G, ("1", "e", "0"), ("0", "e", "1"))
    assert parse_table(G, format_table(t)) == t
    b = parse_table(G, "alpha=- g=b beta=-")
    assert b == T(G, ("", "b", ""))
    with pytest.raises(NotFullBisection):
        parse_table(G, "alpha=0 g=e")
    with pytest.raises(NotFullBisection):
        parse_table(G, "alpha=0 h=e beta=0")
