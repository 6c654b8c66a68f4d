"""Full bisections of the germ groupoid and their transposition factorization.

A table is a list of entries ``(alpha, g, beta)`` whose sources ``beta`` and
ranges ``alpha`` are complete prefix codes; the entry sends ``beta x`` to
``alpha (g.x)``. Canonical tables are maximally contracted.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from fractions import Fraction

from .errors import IndexNonzero, NotFullBisection, OverlappingSupport
from .germs import GermSymbol, expand
from .group import SelfSimilarGroup, parse_tree_word, tree_str, word_str

Entry = GermSymbol


def is_prefix_free(words) -> bool:
    words = sorted(words)
    return all(not b[: len(a)] == a for a, b in zip(words, words[1:]))


def is_complete_code(words, degree: int) -> bool:
    words = list(words)
    if len(set(words)) != len(words) or not is_prefix_free(words):
        return False
    return sum(Fraction(1, degree ** len(w)) for w in words) == 1


def complement_code(words, degree: int) -> list:
    """Prefix code covering exactly the complement of the given disjoint cylinders."""
    words = [tuple(w) for w in words]
    out = []
    stack = [()]
    while stack:
        w = stack.pop()
        if w in words:
            continue
        if any(v[: len(w)] == w for v in words):
            stack.extend(w + (x,) for x in reversed(range(degree)))
        else:
            out.append(w)
    return sorted(out)


def disjoint(u, v) -> bool:
    return u[: len(v)] != v and v[: len(u)] != u


@dataclass(frozen=True)
class BisectionTable:
    entries: tuple

    def __post_init__(self):
        object.__setattr__(self, "entries", tuple(sorted(self.entries, key=lambda e: (e.beta, e.alpha, e.g))))

    @property
    def sources(self) -> list:
        return [e.beta for e in self.entries]

    @property
    def ranges(self) -> list:
        return [e.alpha for e in self.entries]

    @property
    def depth(self) -> int:
        return max((max(len(e.alpha), len(e.beta)) for e in self.entries), default=0)

    def __str__(self):
        return format_table(self)


def table(group: SelfSimilarGroup, entries) -> BisectionTable:
    out = []
    for e in entries:
        if isinstance(e, GermSymbol):
            out.append(GermSymbol(tuple(e.alpha), group.reduce(e.g), tuple(e.beta)))
        else:
            a, g, b = e
            a = parse_tree_word(a) if isinstance(a, str) else tuple(a)
            b = parse_tree_word(b) if isinstance(b, str) else tuple(b)
            out.append(GermSymbol(a, group.reduce(group.parse_word(g)), b))
    return BisectionTable(tuple(out))


def identity_table() -> BisectionTable:
    return BisectionTable((GermSymbol((), (), ()),))


def validate(group: SelfSimilarGroup, t: BisectionTable) -> None:
    if not t.entries:
        raise NotFullBisection("empty table")
    if not is_complete_code(t.sources, group.degree):
        raise NotFullBisection("sources do not form a complete prefix code")
    if not is_complete_code(t.ranges, group.degree):
        raise NotFullBisection("ranges do not form a complete prefix code")


def _try_merge(group: SelfSimilarGroup, children: list, max_len: int):
    d = group.degree
    if any(not c.alpha for c in children):
        return None
    head = children[0].alpha[:-1]
    if any(c.alpha[:-1] != head for c in children):
        return None
    perm = [c.alpha[-1] for c in children]
    if sorted(perm) != list(range(d)):
        return None
    g = group.element_with_sections(perm, [c.g for c in children], max_len)
    if g is None:
        return None
    return GermSymbol(head, g, children[0].beta[:-1])


def canonicalize(group: SelfSimilarGroup, t: BisectionTable, check: bool = True) -> BisectionTable:
    """Validate and contract sibling entries until no merge applies."""
    group.require_word_problem()
    if check:
        validate(group, t)
    d = group.degree
    entries = {e.beta: e for e in t.entries}
    changed = True
    while changed:
        changed = False
        parents = sorted({b[:-1] for b in entries if b}, key=lambda p: (-len(p), p))
        for p in parents:
            kids = [entries.get(p + (x,)) for x in range(d)]
            if any(k is None for k in kids):
                continue
            max_len = 2 * max(len(k.g) for k in kids) + 3
            merged = _try_merge(group, kids, max_len)
            if merged is None:
                continue
            for x in range(d):
                del entries[p + (x,)]
            entries[p] = merged
            changed = True
    return BisectionTable(tuple(entries.values()))


validate_and_canonicalize = canonicalize


def _apply_entry_range(group, e1: GermSymbol, gamma: tuple) -> tuple:
    """``(e1.alpha (g1.gamma), g1|gamma)``."""
    img, restr = group.act(e1.g, gamma)
    return e1.alpha + img, restr


def compose_raw(group: SelfSimilarGroup, t1: BisectionTable, t2: BisectionTable) -> BisectionTable:
    """``t1 o t2`` (``t2`` acts first) without contraction."""
    out = []
    work = list(t2.entries)
    while work:
        e2 = work.pop()
        hit = next((e1 for e1 in t1.entries if e2.alpha[: len(e1.beta)] == e1.beta), None)
        if hit is None:
            if not any(e1.beta[: len(e2.alpha)] == e2.alpha for e1 in t1.entries):
                raise NotFullBisection(f"range {tree_str(e2.alpha)} is not covered by the sources")
            work.extend(expand(group, e2, 1))
            continue
        gamma = e2.alpha[len(hit.beta):]
        alpha, restr = _apply_entry_range(group, hit, gamma)
        out.append(GermSymbol(alpha, group.multiply(restr, e2.g), e2.beta))
    return BisectionTable(tuple(out))


def compose(group: SelfSimilarGroup, t1: BisectionTable, t2: BisectionTable) -> BisectionTable:
    return canonicalize(group, compose_raw(group, t1, t2), check=False)


def compose_all(group: SelfSimilarGroup, tables) -> BisectionTable:
    """``tables[0] o tables[1] o ...``."""
    out = identity_table()
    for t in reversed(list(tables)):
        out = compose_raw(group, t, out)
    return canonicalize(group, out, check=False)


def inverse(group: SelfSimilarGroup, t: BisectionTable) -> BisectionTable:
    return canonicalize(group, BisectionTable(tuple(GermSymbol(e.beta, group.inverse(e.g), e.alpha) for e in t.entries)),
                        check=False)


def apply(group: SelfSimilarGroup, t: BisectionTable, w) -> tuple:
    """Image of a finite word at least as deep as the matching source."""
    w = tuple(w)
    for e in t.entries:
        if w[: len(e.beta)] == e.beta:
            img, _ = group.act(e.g, w[len(e.beta):])
            return e.alpha + img
    raise ValueError(f"word {tree_str(w)} is shorter than the table")


# -- index ------------------------------------------------------------------------


def rho(g) -> int:
    """Homomorphism to Z/2 counting the letter b."""
    return sum(1 for s in g if s == "b") % 2


def index(t: BisectionTable) -> int:
    return sum(rho(e.g) for e in t.entries) % 2


def ab_image(t: BisectionTable) -> int:
    """Image in the abelianization; the index map, since H_0 vanishes."""
    return index(t)


# -- transpositions -------------------------------------------------------------------


@dataclass(frozen=True)
class Transposition:
    entry: GermSymbol

    def table(self, group: SelfSimilarGroup) -> BisectionTable:
        return hat(group, self.entry)

    def __str__(self):
        return f"hat{self.entry}"


def hat(group: SelfSimilarGroup, v) -> BisectionTable:
    """``v``, its inverse, and the identity on the rest of the space."""
    if not isinstance(v, GermSymbol):
        v = table(group, [v]).entries[0]
    if not disjoint(v.alpha, v.beta):
        raise OverlappingSupport(f"Z({tree_str(v.alpha)}) and Z({tree_str(v.beta)}) overlap")
    inv = GermSymbol(v.beta, group.inverse(v.g), v.alpha)
    rest = [GermSymbol(w, (), w) for w in complement_code([v.alpha, v.beta], group.degree)]
    return BisectionTable((v, inv, *rest))


def _prefix_canonical(pairs: dict, degree: int) -> dict:
    """Merge ``beta x -> alpha x`` siblings in a prefix-replacement map."""
    pairs = dict(pairs)
    changed = True
    while changed:
        changed = False
        for b in sorted(pairs, key=len, reverse=True):
            if not b or b not in pairs:
                continue
            p = b[:-1]
            kids = [p + (x,) for x in range(degree)]
            if not all(k in pairs for k in kids):
                continue
            heads = {pairs[k][:-1] for k in kids}
            if len(heads) == 1 and all(pairs[k] and pairs[k][-1] == k[-1] for k in kids):
                head = heads.pop()
                for k in kids:
                    del pairs[k]
                pairs[p] = head
                changed = True
    return pairs


def _swap_prefix(cur: list, u: tuple, v: tuple) -> list:
    out = []
    for w in cur:
        if w[: len(u)] == u:
            w = v + w[len(u):]
        elif w[: len(v)] == v:
            w = u + w[len(v):]
        out.append(w)
    return out


def _uniformize(code: list, degree: int, m: int) -> tuple:
    """Subtree swaps moving a complete code with ``degree**m`` words to the depth-``m`` code.

    Returns the swaps in the order applied and the final position of each word.
    """
    cur = list(code)
    swaps = []
    stack = [()]
    while stack:
        r = stack.pop()
        k = m - len(r)
        if k == 0:
            continue
        target = degree ** (k - 1)
        while True:
            counts = [sum(1 for w in cur if w[: len(r) + 1] == r + (x,)) for x in range(degree)]
            over = [x for x in range(degree) if counts[x] > target]
            if not over:
                break
            i = over[0]
            j = next(x for x in range(degree) if counts[x] < target)
            room = min(counts[i] - target, target - counts[j])
            side = r + (i,)
            nodes = {w[:n] for w in cur if w[: len(side)] == side for n in range(len(side), len(w))}
            best = max((u for u in nodes if 1 < _count(cur, u) <= room + 1),
                       key=lambda u: (_count(cur, u), u))
            leaf = next(w for w in sorted(cur) if w[: len(r) + 1] == r + (j,))
            swaps.append((best, leaf))
            cur = _swap_prefix(cur, best, leaf)
        stack.extend(r + (x,) for x in range(degree))
    return swaps, cur


def _count(cur: list, u: tuple) -> int:
    return sum(1 for w in cur if w[: len(u)] == u)


def _factor_prefix(pairs: dict, degree: int) -> list:
    """Transpositions ``T_0, T_1, ...`` with ``T_0 o T_1 o ... = pairs``.

    Both codes are first brought to the uniform code of one depth by subtree
    swaps; what remains is a permutation of equal-length words.
    """
    pairs = _prefix_canonical(pairs, degree)
    items = sorted(pairs.items())
    m = 0
    while degree ** m < len(items):
        m += 1
    while len(items) < degree ** m:
        b, a = max(items, key=lambda ba: (len(ba[0]), ba))
        items.remove((b, a))
        items.extend((b + (x,), a + (x,)) for x in range(degree))
    srcs = [b for b, _ in items]
    dsts = [a for _, a in items]
    swaps_b, pos_b = _uniformize(srcs, degree, m)
    swaps_a, pos_a = _uniformize(dsts, degree, m)
    words = _words(degree, m)
    where = {w: i for i, w in enumerate(words)}
    # middle permutation sends pos_b[i] to pos_a[i]
    arr = [0] * len(words)
    for pb, pa in zip(pos_b, pos_a):
        arr[where[pb]] = where[pa]
    bubble = []
    changed = True
    while changed:
        changed = False
        for j in range(len(arr) - 1):
            if arr[j] > arr[j + 1]:
                arr[j], arr[j + 1] = arr[j + 1], arr[j]
                bubble.append(j)
                changed = True
    middle = [GermSymbol(words[j + 1], (), words[j]) for j in reversed(bubble)]
    left = [GermSymbol(v, (), u) for u, v in swaps_a]
    right = [GermSymbol(v, (), u) for u, v in reversed(swaps_b)]
    return left + middle + right


def _words(degree: int, n: int) -> list:
    return [tuple(p) for p in itertools.product(range(degree), repeat=n)]


def _dihedral_letters(h: tuple) -> list:
    """Write an index-zero reduced word as letters ``a`` and ``c = bab``."""
    if rho(h):
        raise IndexNonzero("product of the group parts has nonzero index")
    out = []
    i = 0
    while i < len(h):
        if h[i] == "a":
            out.append("a")
            i += 1
        else:
            if h[i:i + 3] != ("b", "a", "b"):
                raise ValueError(f"unexpected word shape {word_str(h)}")
            out.append("c")
            i += 3
    return out


def factor(group: SelfSimilarGroup, t: BisectionTable) -> list:
    """Transpositions whose completions compose, in order, to ``t``."""
    t = canonicalize(group, t)
    if index(t):
        raise IndexNonzero("table has index 1 in Z/2")
    entries = list(t.entries)
    # U2: beta_i x -> alpha_i x ; U1: alpha_i x -> alpha_i (g_i x)
    prefix_part = _factor_prefix({e.beta: e.alpha for e in entries}, group.degree)
    codes = sorted(entries, key=lambda e: e.alpha)
    first = codes[0].alpha
    group_part = []
    for e in codes[1:]:
        if not e.g:
            continue
        group_part = [GermSymbol(first, (), e.alpha), GermSymbol(first, e.g, e.alpha)] + group_part
    h = group.multiply(*[e.g for e in codes])
    closing = []
    for letter in _dihedral_letters(h):
        g = () if letter == "a" else ("b", "a")
        closing.append(GermSymbol(first + (1,), g, first + (0,)))
    out = [Transposition(v) for v in closing + group_part + prefix_part]
    got = compose_all(group, [tr.table(group) for tr in out])
    if got != t:
        raise AssertionError(f"factorization does not reproduce the table: {got} != {t}")
    return out


# -- text syntax and sampling ---------------------------------------------------------


def parse_table(group: SelfSimilarGroup, text: str) -> BisectionTable:
    entries = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        fields = {}
        for tok in line.split():
            key, eq, val = tok.partition("=")
            if not eq or key not in ("alpha", "g", "beta"):
                raise NotFullBisection(f"line {lineno}: expected alpha=... g=... beta=...")
            fields[key] = val
        if set(fields) != {"alpha", "g", "beta"}:
            raise NotFullBisection(f"line {lineno}: missing field")
        entries.append((fields["alpha"], fields["g"], fields["beta"]))
    return table(group, entries)


def format_table(t: BisectionTable) -> str:
    return "\n".join(f"alpha={tree_str(e.alpha)} g={word_str(e.g)} beta={tree_str(e.beta)}" for e in t.entries)


def random_code(rng: random.Random, degree: int, max_depth: int, split: float = 0.5) -> list:
    out = []
    stack = [()]
    while stack:
        w = stack.pop()
        if len(w) < max_depth and (not w or rng.random() < split):
            stack.extend(w + (x,) for x in range(degree))
        else:
            out.append(w)
    return sorted(out)


def random_table(group: SelfSimilarGroup, rng: random.Random, max_depth: int = 4, max_len: int = 6,
                 index_value: int = None) -> BisectionTable:
    """Random full bisection; ``index_value`` forces the index when given."""
    words = list(group.reduced_words(max_len))
    while True:
        src = random_code(rng, group.degree, max_depth)
        rng_code = random_code(rng, group.degree, max_depth)
        if len(src) != len(rng_code):
            continue
        rng.shuffle(rng_code)
        entries = [GermSymbol(a, rng.choice(words), b) for a, b in zip(rng_code, src)]
        t = BisectionTable(tuple(entries))
        if index_value is not None and index(t) != index_value:
            e = entries[0]
            flip = next(w for w in words if rho(w) != rho(e.g))
            entries[0] = GermSymbol(e.alpha, flip, e.beta)
            t = BisectionTable(tuple(entries))
        return canonicalize(group, t)
