import pytest
from hypothesis import given
from hypothesis import strategies as st

from selfsim.errors import GroupDefinitionError, NonterminatingRewrite, UnknownGenerator, WordProblemUnavailable
from selfsim.group import (
    DIHEDRAL_TEXT,
    SelfSimilarGroup,
    dihedral_closed_forms,
    load_group,
    parse_group,
    parse_tree_word,
    trivial_group,
    word_str,
)

words = st.lists(st.sampled_from("ab"), max_size=10).map(tuple)
tree_words = st.lists(st.integers(0, 1), max_size=6).map(tuple)


def ab(m):
    return ("a", "b") * m


def ba(m):
    return ("b", "a") * m


@pytest.mark.parametrize("w, expected", [("abba", ""), ("aba", "aba"), ("aabab", "bab")])
def test_reduce_examples(G, w, expected):
    assert word_str(G.reduce(w)) == (expected or "e")


def test_act_examples(G):
    assert G.act("a", (0, 1)) == ((1, 1), ())
    assert G.act("ab", (0,)) == ((1,), ("a",))
    for w in [(), (0,), (1, 0, 1)]:
        assert G.act("", w) == (w, ())


def test_level_permutation_examples(G):
    # words 00, 01, 10, 11 -> indices 0..3
    assert G.level_permutation("a", 2) == [2, 3, 0, 1]
    assert G.level_permutation("b", 2) == [1, 0, 2, 3]
    assert G.level_permutation("", 3) == list(range(8))


def test_orbits_examples(G):
    assert G.orbits(0) == [[()]]
    assert G.orbits(1) == [[(0,), (1,)]]
    assert len(G.orbits(2)) == 1 and len(G.orbits(2)[0]) == 4


def test_pseudo_free_dihedral(G):
    res = G.check_pseudo_free(16)
    assert res.pseudo_free and res.counterexample is None
    # every nonidentity reduced word up to 16 appears with both letters
    assert len({g for g, *_ in res.certificate}) >= 32


def test_pseudo_free_counterexample():
    text = DIHEDRAL_TEXT.replace("gen b : 0 -> 0 | a", "gen b : 0 -> 0 | e")
    res = parse_group(text, "modified").check_pseudo_free(4)
    assert not res.pseudo_free
    assert res.counterexample == (("b",), 0)


def test_pseudo_free_trivial_group():
    assert trivial_group().check_pseudo_free(5).pseudo_free


def test_unknown_generator(G):
    with pytest.raises(UnknownGenerator):
        G.act("c", (0,))


def test_nonterminating_rewrite():
    grp = SelfSimilarGroup("loop", 2, {"a": ((0, ()), (1, ()))}, [(("a",), ("a", "a"))], max_rewrite_steps=50)
    with pytest.raises(NonterminatingRewrite):
        grp.reduce(("a",))


def test_non_confluent_refuses():
    # ab -> e and ba -> c do not resolve the overlap of "aba"
    table = {"a": ((1, ()), (0, ())), "b": ((1, ()), (0, ())), "c": ((0, ()), (1, ()))}
    grp = SelfSimilarGroup("bad", 2, table, [(("a", "b"), ()), (("b", "a"), ("c",)),
                                               (("a", "a"), ()), (("b", "b"), ()), (("c", "c"), ())])
    with pytest.raises(WordProblemUnavailable):
        grp.require_word_problem()


def test_group_file_round_trip(tmp_path):
    path = tmp_path / "d.grp"
    path.write_text(DIHEDRAL_TEXT, encoding="utf-8")
    grp = load_group(str(path))
    assert grp.table == load_group("dihedral-z2-z2").table
    assert grp.degree == 2


@pytest.mark.parametrize("text", [
    "gen a : 0 -> 1 | e ; 1 -> 0 | e",  # no alphabet line
    "alphabet 2\ngen a : 0 -> 0 | e ; 1 -> 0 | e",  # not a permutation
    "alphabet 2\ngen a : 0 -> 1 | q ; 1 -> 0 | e",  # unknown restriction
    "alphabet 2\nfoo bar",
])
def test_group_file_errors(text):
    with pytest.raises(GroupDefinitionError):
        parse_group(text)


def test_tree_word_syntax():
    assert parse_tree_word("-") == ()
    assert parse_tree_word("0110") == (0, 1, 1, 0)


def test_closed_forms(G):
    for n in range(17):
        assert G.step(ab(2 * n), 0) == (0, ba(n))
        assert G.step(ab(2 * n + 1), 0) == (1, ("a",) + ba(n))
        for g, x, y, r in dihedral_closed_forms(n):
            assert G.step(g, x) == (y, r)


def test_general_degree_group():
    # the adding machine on three letters: t.(0w) = 1w, t.(1w) = 2w, t.(2w) = 0 (t.w)
    grp = parse_group("alphabet 3\ngen t : 0 -> 1 | e ; 1 -> 2 | e ; 2 -> 0 | t\n", "adder3")
    assert grp.act("t", (2, 2, 0)) == ((0, 0, 1), ())
    assert grp.act(("t", "t^-1"), (2, 1)) == ((2, 1), ())
    assert len(grp.orbits(3)) == 1


@given(words, st.integers(0, 6))
def test_level_permutation_is_bijection(G, g, k):
    perm = G.level_permutation(G.reduce(g), k)
    assert sorted(perm) == list(range(2 ** k))


@given(words, words, tree_words)
def test_cocycle_identity(G, g, h, w):
    g, h = G.reduce(g), G.reduce(h)
    hw, h_r = G.act(h, w)
    gw, g_r = G.act(g, hw)
    img, r = G.act(G.multiply(g, h), w)
    assert img == gw
    assert r == G.reduce(g_r + h_r)


@given(tree_words)
def test_involutions(G, w):
    assert G.act("aa", w) == (w, ())
    assert G.act("bb", w) == (w, ())


@given(words)
def test_reduce_idempotent_and_shortening(G, w):
    r = G.reduce(w)
    assert G.reduce(r) == r
    assert len(r) <= len(w)
    assert all(x != y for x, y in zip(r, r[1:]))


@given(words, tree_words)
def test_inverse_undoes_action(G, g, w):
    g = G.reduce(g)
    img, _ = G.act(g, w)
    assert G.act(G.inverse(g), img)[0] == w
