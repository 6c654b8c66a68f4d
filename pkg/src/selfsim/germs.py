"""Low-degree chains on the germ groupoid of a self-similar action.

A symbol ``(alpha, g, beta)`` is the bisection sending ``beta x`` to
``alpha (g.x)``. It equals the sum of its one-letter expansions
``(alpha (g.x), g|x, beta x)``, and over a pseudo-free group two symbols
define the same bisection exactly when they agree after expanding to a common
source depth. Chains are compared in that normal form.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass

import numpy as np

from .errors import NotComposable
from .group import SelfSimilarGroup, Word, parse_tree_word, tree_str, word_str
from .homology import depth_module, fox_cycle, group_homology


@dataclass(frozen=True, order=True)
class GermSymbol:
    alpha: tuple
    g: Word
    beta: tuple

    def __str__(self):
        return f"({tree_str(self.alpha)}, {word_str(self.g)}, {tree_str(self.beta)})"


def symbol(group: SelfSimilarGroup, alpha, g, beta) -> GermSymbol:
    a = parse_tree_word(alpha) if isinstance(alpha, str) else tuple(alpha)
    b = parse_tree_word(beta) if isinstance(beta, str) else tuple(beta)
    return GermSymbol(a, group.reduce(group.parse_word(g)), b)


def expand(group: SelfSimilarGroup, s: GermSymbol, levels: int = 1) -> list:
    out = [s]
    for _ in range(levels):
        nxt = []
        for t in out:
            for x in range(group.degree):
                y, r = group.step(t.g, x)
                nxt.append(GermSymbol(t.alpha + (y,), r, t.beta + (x,)))
        out = nxt
    return out


def _clean(d: dict) -> dict:
    return {k: v for k, v in sorted(d.items()) if v}


def canonical_chain0(group: SelfSimilarGroup, terms) -> tuple:
    """``(depth, {cylinder: coefficient})`` with every cylinder at one depth."""
    terms = [(int(c), tuple(w)) for c, w in terms]
    depth = max((len(w) for _, w in terms), default=0)
    out = defaultdict(int)
    for c, w in terms:
        for tail in group.words(depth - len(w)):
            out[w + tail] += c
    return depth, _clean(out)


def canonical_chain1(group: SelfSimilarGroup, terms) -> tuple:
    """``(depth, {symbol: coefficient})`` with every source word at one depth."""
    terms = [(int(c), s) for c, s in terms]
    depth = max((len(s.beta) for _, s in terms), default=0)
    out = defaultdict(int)
    for c, s in terms:
        for t in expand(group, s, depth - len(s.beta)):
            out[t] += c
    return depth, _clean(out)


def delta1(group: SelfSimilarGroup, terms) -> tuple:
    """Source minus range: ``(alpha, g, beta) -> 1_Z(beta) - 1_Z(alpha)``."""
    out = []
    for c, s in terms:
        out.append((c, s.beta))
        out.append((-c, s.alpha))
    return canonical_chain0(group, out)


def _restrict_pair(group: SelfSimilarGroup, second: GermSymbol, first: GermSymbol):
    """Restrict ``first`` to range and ``second`` to source on their common cylinder."""
    a, b = first.alpha, second.beta
    if a[: len(b)] == b:
        common = a
    elif b[: len(a)] == a:
        common = b
    else:
        raise NotComposable(f"range of {first} and source of {second} are disjoint")
    f = [t for t in expand(group, first, len(common) - len(a)) if t.alpha == common]
    s = [t for t in expand(group, second, len(common) - len(b)) if t.beta == common]
    return s[0], f[0]


def compose(group: SelfSimilarGroup, second: GermSymbol, first: GermSymbol) -> GermSymbol:
    """``second o first`` on the part where it is defined."""
    s, f = _restrict_pair(group, second, first)
    return GermSymbol(s.alpha, group.multiply(s.g, f.g), f.beta)


def delta2_terms(group: SelfSimilarGroup, pairs) -> list:
    """Unnormalized ``d(s', s) = s - s's + s'`` summed over ``(c, s', s)``."""
    out = []
    for c, second, first in pairs:
        s, f = _restrict_pair(group, second, first)
        out.append((c, f))
        out.append((-c, GermSymbol(s.alpha, group.multiply(s.g, f.g), f.beta)))
        out.append((c, s))
    return out


def delta2(group: SelfSimilarGroup, pairs) -> tuple:
    return canonical_chain1(group, delta2_terms(group, pairs))


def germ_witness_check(group: SelfSimilarGroup, claim, witness) -> bool:
    """Whether the degree-2 witness has boundary exactly equal to the claimed chain."""
    group.require_word_problem()
    lhs = delta2_terms(group, witness)
    both = lhs + [(-c, s) for c, s in claim]
    return not canonical_chain1(group, both)[1]


def is_cycle1(group: SelfSimilarGroup, terms) -> bool:
    return not delta1(group, terms)[1]


# -- comparison with the resolution ---------------------------------------------------


def fox_image(module, terms) -> np.ndarray:
    """Resolution 1-chain of a combination of full-space symbols ``(e, g, e)``."""
    ones = module.indicator(())
    n = module.rank * len(module.generators)
    out = np.empty(n, dtype=object)
    out.fill(0)
    for c, s in terms:
        if s.alpha or s.beta:
            raise ValueError("only full-space symbols map to the transformation groupoid directly")
        out += int(c) * fox_cycle(module, s.g, ones)
    return out


def cross_engine_check(group: SelfSimilarGroup, max_depth: int = 4, max_len: int = 4) -> dict:
    """Germ boundaries among full-space classes are resolution boundaries too.

    For every pair of reduced words up to ``max_len`` the relation
    ``[g] + [h] - [hg]`` is witnessed by the pair ``(h, g)``; its image under
    ``fox_image`` must vanish in ``H_1`` at each depth.
    """
    words = list(group.reduced_words(max_len))
    claims = []
    for g in words:
        for h in words:
            sg, sh = symbol(group, (), g, ()), symbol(group, (), h, ())
            claim = [(1, sg), (1, sh), (-1, symbol(group, (), group.multiply(h, g), ()))]
            claims.append((claim, [(1, sh, sg)]))
    out = {"pairs": len(claims), "germ_ok": True, "depths": {}}
    for claim, witness in claims:
        if not germ_witness_check(group, claim, witness):
            out["germ_ok"] = False
    for k in range(max_depth + 1):
        mod = depth_module(group, k)
        sq = group_homology(mod, 1)
        ok = True
        for claim, _ in claims:
            v = fox_image(mod, claim)
            if not sq.is_boundary(v):
                ok = False
                break
        gens_ok = all(sq.is_cycle(fox_image(mod, [(1, symbol(group, (), (s,), ()))])) for s in mod.generators)
        out["depths"][k] = ok and gens_ok
    out["ok"] = out["germ_ok"] and all(out["depths"].values())
    return out


def fox_classes(group: SelfSimilarGroup, k: int) -> dict:
    """Normal-form ``H_1`` coordinates of each full-space generator class at depth ``k``."""
    mod = depth_module(group, k)
    sq = group_homology(mod, 1)
    return {s: tuple(int(x) for x in sq.project(fox_image(mod, [(1, symbol(group, (), (s,), ()))])))
            for s in mod.generators}


__all__ = [
    "GermSymbol",
    "symbol",
    "expand",
    "canonical_chain0",
    "canonical_chain1",
    "delta1",
    "delta2",
    "delta2_terms",
    "compose",
    "germ_witness_check",
    "is_cycle1",
    "fox_image",
    "cross_engine_check",
    "fox_classes",
]
