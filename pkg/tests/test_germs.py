import pytest
from hypothesis import given
from hypothesis import strategies as st

from selfsim.errors import NotComposable
from selfsim.germs import (
    GermSymbol,
    canonical_chain1,
    compose,
    cross_engine_check,
    delta1,
    delta2,
    delta2_terms,
    expand,
    fox_classes,
    germ_witness_check,
    is_cycle1,
    symbol,
)

tree = st.lists(st.integers(0, 1), max_size=3).map(tuple)
gword = st.lists(st.sampled_from("ab"), max_size=5).map(tuple)


def test_witness_examples(G):
    b, e = symbol(G, "-", "b", "-"), symbol(G, "-", "e", "-")
    assert germ_witness_check(G, [(2, b), (-1, e)], [(1, b, b)])
    assert germ_witness_check(G, [(1, e)], [(1, e, e)])
    assert not germ_witness_check(G, [(1, b)], [(1, b, b)])


def test_product_relation(G):
    for g in G.reduced_words(3):
        for h in G.reduced_words(3):
            sg, sh = symbol(G, "", g, ""), symbol(G, "", h, "")
            sgh = symbol(G, "", G.multiply(h, g), "")
            assert germ_witness_check(G, [(1, sg), (1, sh), (-1, sgh)], [(1, sh, sg)])


def test_expansion_identity(G):
    s = symbol(G, "0", "ab", "1")
    kids = expand(G, s)
    assert kids == [GermSymbol((0, 1), ("a",), (1, 0)), GermSymbol((0, 0), ("b",), (1, 1))]
    # a symbol and its expansion are the same chain
    assert not canonical_chain1(G, [(1, s)] + [(-1, k) for k in kids])[1]


def test_disjoint_pair_not_composable(G):
    with pytest.raises(NotComposable):
        compose(G, symbol(G, "1", "e", "1"), symbol(G, "0", "e", "0"))


def test_composition(G):
    c = compose(G, symbol(G, "0", "e", "1"), symbol(G, "1", "a", ""))
    assert c == GermSymbol((0,), ("a",), ())
    # the second factor only sees the part of the range below 11
    c = compose(G, symbol(G, "0", "b", "11"), symbol(G, "1", "e", "0"))
    assert c == GermSymbol((0,), ("b",), (0, 1))


@given(tree, gword, tree, gword, st.data())
def test_boundary_of_boundary(G, alpha, g, beta, h, data):
    g, h = G.reduce(g), G.reduce(h)
    first = GermSymbol(alpha, g, beta)
    # choose the second symbol's source inside or around the range of the first
    k = data.draw(st.integers(0, len(alpha)))
    second = GermSymbol(data.draw(tree), h, alpha[:k])
    terms = delta2_terms(G, [(1, second, first)])
    assert not delta1(G, terms)[1]


@given(tree, gword, tree)
def test_cycles_are_source_range_balanced(G, alpha, g, beta):
    s = GermSymbol(alpha, G.reduce(g), beta)
    assert is_cycle1(G, [(1, s)]) == (alpha == beta)


def test_cross_engine(G):
    out = cross_engine_check(G, max_depth=4, max_len=3)
    assert out["ok"] and out["germ_ok"]
    assert out["pairs"] == 49


def test_fox_classes_match_germ_relations(G):
    # [a] vanishes once the depth is positive; [b] survives with order two
    for k in range(1, 5):
        fc = fox_classes(G, k)
        assert fc["a"] == (0, 0)
        assert fc["b"] != (0, 0)
        assert tuple((2 * x) % 2 for x in fc["b"]) == (0, 0)


def test_delta2_normal_form(G):
    b = symbol(G, "", "b", "")
    depth, chain = delta2(G, [(1, b, b)])
    assert depth == 0
    assert chain == {b: 2, symbol(G, "", "", ""): -1}
