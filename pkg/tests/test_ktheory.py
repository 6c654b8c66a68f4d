import itertools
from fractions import Fraction

import numpy as np
import pytest

from selfsim.abelian import identity
from selfsim.colimit import colim_equal, level_map
from selfsim.ktheory import (
    GroupRingElement,
    GroupRingMatrix,
    connecting_columns,
    connecting_matrix,
    hk_report,
    k0_colimit,
    matrix_recursion,
    normalized_coordinates,
    coordinate_families,
    pv_compute,
)


def U(G, g, level=0):
    return GroupRingMatrix.scalar(G, level, GroupRingElement.unit(G, g))


@pytest.fixture(scope="module")
def k0():
    return k0_colimit()


@pytest.fixture(scope="module")
def pv(k0):
    return pv_compute(k0)


def test_recursion_examples(G):
    one = GroupRingElement.unit(G)
    phi_a = matrix_recursion(U(G, ("a",)))
    assert phi_a.entries == {(0, 1): one, (1, 0): one}
    phi_b = matrix_recursion(U(G, ("b",)))
    assert phi_b.entries == {(0, 0): GroupRingElement.unit(G, ("a",)), (1, 1): GroupRingElement.unit(G, ("b",))}
    assert matrix_recursion(U(G, ())) == U(G, (), 1)


def test_recursion_preserves_relations(G):
    for s in ("a", "b"):
        phi = matrix_recursion(U(G, (s,)))
        assert phi * phi == U(G, (), 1)


def _ball(G, level):
    """Products of at most two matrix-unit generators at ``level`` with short group labels."""
    words = [w for w in G.reduced_words(2)]
    idx = G.words(level)
    out = []
    for g in words:
        for v, w in itertools.product(idx, repeat=2):
            out.append(GroupRingMatrix.unit(G, level, g, v, w))
    return out


@pytest.mark.parametrize("level", [0, 1, 2])
def test_recursion_is_a_star_homomorphism(G, level):
    ball = _ball(G, level)
    for x, y in itertools.islice(itertools.product(ball, repeat=2), 0, None, 7):
        px, py = matrix_recursion(x), matrix_recursion(y)
        assert matrix_recursion(x * y) == px * py
        assert matrix_recursion(x + y) == px + py
    for x in ball:
        assert matrix_recursion(x.star()) == matrix_recursion(x).star()


def test_recursion_on_longer_products(G):
    gens = [U(G, ("a",)), U(G, ("b",))]
    for n in range(1, 5):
        for combo in itertools.product(gens, repeat=n):
            prod = combo[0]
            for c in combo[1:]:
                prod = prod * c
            phi = matrix_recursion(combo[0])
            for c in combo[1:]:
                phi = phi * matrix_recursion(c)
            assert matrix_recursion(prod) == phi


def test_connecting_matrix(G):
    assert connecting_matrix(G).tolist() == [[2, 1, 0], [0, 0, 1], [0, 0, 1]]
    sources = {c.label: c.source for c in connecting_columns(G)}
    assert sources == {"1": "computed", "P": "axiom", "Q": "computed"}


def test_k0_model_and_report(k0):
    assert k0.model.label == "Z[1/2] + Z"
    r = k0.report
    assert all(r["relations"].values())
    assert r["psi_families"] and r["psi_telescoping"] and r["psi_rescaling_is_automorphism"]
    assert r["push_two_levels"]


def test_psi_closed_forms(k0):
    e = k0.system.basis_element
    for n in range(13):
        fam = coordinate_families(n)
        assert normalized_coordinates(k0.model, e(n, 0)) == fam["1"]
        assert normalized_coordinates(k0.model, e(n, 2)) == fam["Q"]
        # telescoping: Psi(Q_n) = Psi(Q_{n+1}) + (1/2^{n+2}, 0)
        q1 = normalized_coordinates(k0.model, e(n + 1, 2))
        assert fam["Q"] == (q1[0] + Fraction(1, 2 ** (n + 2)), q1[1])


def test_pv(pv):
    assert pv.k0.label == "Z"
    assert pv.k1.label == "Z"
    assert pv.shift_fixes_unit is False
    assert pv.k1_generator_coords == (Fraction(-1, 2), Fraction(1))
    assert pv.reference_in_kernel is False


def test_one_minus_shift_images(k0):
    system = k0.system
    h = level_map(system, [(1, 0, identity(3)), (-1, 1, identity(3))])
    for n in range(6):
        y = normalized_coordinates(k0.model, h.apply(system, system.basis_element(n, 0)))
        assert y == (Fraction(1, 2 ** (n + 1)), 0)
    y = normalized_coordinates(k0.model, h.apply(system, system.basis_element(0, 2)))
    assert y == (Fraction(1, 4), 0)


def test_pv_generator_independent_of_level(k0, pv):
    gen = pv.k1_generator_element
    model = k0.model
    y = model.to_model(gen)
    reps = [model.from_model(y, min_level=lvl) for lvl in range(5)]
    for r in reps:
        assert colim_equal(k0.system, r, gen)


def test_hk_report_examples():
    rows = hk_report({0: 1, 1: 1}, {0: 0, 1: 0, 2: 0}, {3: True, 4: True, 5: True, 6: True})
    assert [(r.k_rank, r.h_rank, r.verdict) for r in rows] == [(1, 0, "MISMATCH"), (1, 0, "MISMATCH")]
    rows = hk_report({0: 1, 1: 0}, {0: 1, 1: 0, 2: 0}, {3: True, 4: True, 5: True, 6: True})
    assert [r.verdict for r in rows] == ["MATCH", "MATCH"]
    rows = hk_report({0: 1, 1: 1}, {0: 0, 1: 0, 2: 0}, {})
    assert [r.verdict for r in rows] == ["UNDETERMINED", "UNDETERMINED"]


def test_group_ring_basics(G):
    x = GroupRingElement(G, {"ab": 2, "": 1})
    y = GroupRingElement(G, {"ba": 1})
    assert x * y == GroupRingElement(G, {"": 2, "ba": 1})
    assert x.star() == GroupRingElement(G, {"ba": 2, "": 1})
    assert not (x - x)
    assert np.array_equal(connecting_matrix(G), connecting_matrix())
