"""Self-similar groups given by a wreath recursion.

Group elements are words over generator names, stored as tuples of strings.
Tree words are tuples of letter indices ``0 <= x < d``. Elements act on the
left: in a product ``gh`` the element ``h`` is applied first.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterator, Sequence

from .errors import (
    GroupDefinitionError,
    NonterminatingRewrite,
    UnknownGenerator,
    WordProblemUnavailable,
)

Word = tuple  # tuple[str, ...]
TreeWord = tuple  # tuple[int, ...]

IDENTITY: Word = ()
DIHEDRAL = "dihedral-z2-z2"


def word_str(w: Word) -> str:
    if not w:
        return "e"
    if all(len(s) == 1 for s in w):
        return "".join(w)
    return " ".join(w)


def tree_str(w: TreeWord) -> str:
    return "".join(str(x) for x in w) if w else "-"


def parse_tree_word(text: str) -> TreeWord:
    text = text.strip()
    if text in ("", "-", "ε"):
        return ()
    return tuple(int(ch) for ch in text)


def _inverse_name(name: str) -> str:
    return name[:-3] if name.endswith("^-1") else name + "^-1"


@dataclass(frozen=True, eq=False)
class SelfSimilarGroup:
    """A group defined by its wreath recursion and a rewriting system.

    ``table[s][x] = (y, r)`` encodes ``s.(x w) = y (r.w)``. Generators that
    appear in an ``s s -> e`` rule are involutions; any other generator gets a
    formal inverse ``s^-1`` whose recursion is derived automatically.
    """

    name: str
    degree: int
    table: dict
    rules: tuple = ()
    max_rewrite_steps: int = 100_000
    _inverse: dict = field(init=False, repr=False)

    def __post_init__(self):
        if self.degree < 1:
            raise GroupDefinitionError("alphabet size must be positive")
        table = {s: tuple((int(y), tuple(r)) for y, r in rows) for s, rows in self.table.items()}
        for s, rows in table.items():
            if len(rows) != self.degree:
                raise GroupDefinitionError(f"generator {s!r} needs {self.degree} entries")
            if sorted(y for y, _ in rows) != list(range(self.degree)):
                raise GroupDefinitionError(f"generator {s!r} does not permute the alphabet")
        rules = [(tuple(l), tuple(r)) for l, r in self.rules]
        involutions = {l[0] for l, r in rules if len(l) == 2 and l[0] == l[1] and not r}
        inverse = {}
        for s in list(table):
            if s in involutions:
                inverse[s] = s
                continue
            t = _inverse_name(s)
            inverse[s], inverse[t] = t, s
            rules.append(((s, t), ()))
            rules.append(((t, s), ()))
        for s in list(table):
            t = inverse[s]
            if t == s or t in table:
                continue
            rows = [None] * self.degree
            for x, (y, r) in enumerate(table[s]):
                rows[y] = (x, tuple(inverse.get(q, _inverse_name(q)) for q in reversed(r)))
            table[t] = tuple(rows)
        for s, rows in table.items():
            for _, r in rows:
                for q in r:
                    if q not in table:
                        raise GroupDefinitionError(f"restriction of {s!r} uses unknown generator {q!r}")
        object.__setattr__(self, "table", table)
        object.__setattr__(self, "rules", tuple(rules))
        object.__setattr__(self, "_inverse", inverse)

    # -- words -----------------------------------------------------------

    @property
    def generators(self) -> tuple:
        """Named generators in definition order (formal inverses excluded)."""
        return tuple(s for s in self.table if not s.endswith("^-1"))

    def parse_word(self, text) -> Word:
        if isinstance(text, tuple):
            w = text
        else:
            text = text.strip()
            if text in ("", "e", "1"):
                return ()
            if " " in text or "." in text:
                w = tuple(t for t in text.replace(".", " ").split() if t != "e")
            elif text in self.table:
                w = (text,)
            else:
                w = tuple(text)
        for s in w:
            if s not in self.table:
                raise UnknownGenerator(s)
        return w

    def inverse(self, w: Word) -> Word:
        return self.reduce(tuple(self._inverse[s] for s in reversed(w)))

    def multiply(self, *words: Word) -> Word:
        return self.reduce(tuple(itertools.chain.from_iterable(words)))

    def reduce(self, w) -> Word:
        """Canonical form under the rewriting rules (leftmost-first)."""
        w = tuple(w)
        return _reduce(w, self.rules, self.max_rewrite_steps)

    @property
    def cancellation_only(self) -> bool:
        return all(len(l) == 2 and not r for l, r in self.rules)

    def is_confluent(self) -> bool:
        """Check local confluence of the rules by resolving critical pairs."""
        rules = self.rules
        for (l1, r1), (l2, r2) in itertools.product(rules, repeat=2):
            if any(len(r) > len(l) for l, r in ((l1, r1), (l2, r2))):
                return False
            for k in range(1, min(len(l1), len(l2)) + 1):
                if l1[-k:] == l2[:k]:
                    a = r1 + l2[k:]
                    b = l1[:-k] + r2
                    try:
                        if self.reduce(a) != self.reduce(b):
                            return False
                    except NonterminatingRewrite:
                        return False
            if len(l2) < len(l1):
                for i in range(len(l1) - len(l2) + 1):
                    if l1[i:i + len(l2)] == l2:
                        a = r1
                        b = l1[:i] + r2 + l1[i + len(l2):]
                        if self.reduce(a) != self.reduce(b):
                            return False
        return True

    def require_word_problem(self):
        if not _confluent_cached(self):
            raise WordProblemUnavailable(f"rewriting system of {self.name!r} is not confluent")

    # -- action ----------------------------------------------------------

    def step(self, g: Word, x: int) -> tuple:
        """``(g.x, g|x)`` for a single letter; the restriction is reduced."""
        return _step(self, tuple(g), x)

    def act(self, g, w: Sequence[int]) -> tuple:
        """Image of the tree word ``w`` under ``g`` and the restriction ``g|w``."""
        g = self.parse_word(g)
        out = []
        state = self.reduce(g)
        for x in w:
            if not 0 <= x < self.degree:
                raise ValueError(f"letter {x} outside alphabet")
            y, state = _step(self, state, x)
            out.append(y)
        return tuple(out), state

    def words(self, k: int) -> list:
        """All depth-``k`` tree words, lexicographic."""
        return [tuple(p) for p in itertools.product(range(self.degree), repeat=k)]

    def word_index(self, w: TreeWord) -> int:
        i = 0
        for x in w:
            i = i * self.degree + x
        return i

    def level_permutation(self, g, k: int) -> list:
        """``perm[i]`` is the index of ``g`` applied to the ``i``-th depth-k word."""
        g = self.reduce(self.parse_word(g))
        return [self.word_index(self.act(g, w)[0]) for w in self.words(k)]

    def orbits(self, k: int) -> list:
        """Orbits of the generators on depth-``k`` words, least representative first."""
        words = self.words(k)
        parent = list(range(len(words)))

        def find(i):
            while parent[i] != i:
                parent[i] = parent[parent[i]]
                i = parent[i]
            return i

        for s in self.generators:
            for i, j in enumerate(self.level_permutation((s,), k)):
                a, b = find(i), find(j)
                if a != b:
                    parent[max(a, b)] = min(a, b)
        groups = {}
        for i in range(len(words)):
            groups.setdefault(find(i), []).append(words[i])
        return [groups[r] for r in sorted(groups)]

    def reduced_words(self, max_len: int) -> Iterator[Word]:
        """Distinct reduced words of length <= max_len, by length then lexicographic."""
        seen = {()}
        frontier = [()]
        yield ()
        for _ in range(max_len):
            nxt = []
            for w in frontier:
                for s in sorted(self.table):
                    v = self.reduce(w + (s,))
                    if len(v) == len(w) + 1 and v not in seen:
                        seen.add(v)
                        nxt.append(v)
            nxt.sort()
            yield from nxt
            frontier = nxt

    def element_with_sections(self, perm: Sequence[int], sections: Sequence[Word], max_len: int = None):
        """The element acting on letters by ``perm`` with restrictions ``sections``, if any."""
        target = (tuple(perm), tuple(self.reduce(s) for s in sections))
        if max_len is None:
            max_len = 2 * max(len(s) for s in target[1]) + 2
        for g in self.reduced_words(max_len):
            steps = [self.step(g, x) for x in range(self.degree)]
            if tuple(y for y, _ in steps) == target[0] and tuple(r for _, r in steps) == target[1]:
                return g
        return None

    # -- pseudo-freeness -------------------------------------------------

    def check_pseudo_free(self, max_len: int) -> "PseudoFreeResult":
        self.require_word_problem()
        verified = []
        for g in self.reduced_words(max_len):
            if not g:
                continue
            for x in range(self.degree):
                y, r = self.step(g, x)
                if y == x and not r:
                    return PseudoFreeResult(False, verified, (g, x))
                verified.append((g, x, y, r))
        if self.name == DIHEDRAL:
            for n in range(max_len // 2 + 1):
                if 2 * n + 1 > max_len:
                    break
                for g, x, y, r in dihedral_closed_forms(n):
                    if self.step(g, x) != (y, r):
                        return PseudoFreeResult(False, verified, (g, x))
                    verified.append((g, x, y, r))
        return PseudoFreeResult(True, verified, None)


@dataclass
class PseudoFreeResult:
    pseudo_free: bool
    certificate: list
    counterexample: tuple | None

    def __bool__(self):
        return self.pseudo_free


def _reduce(w: Word, rules, budget) -> Word:
    if all(len(l) == 2 and not r for l, r in rules):
        pairs = {l for l, _ in rules}
        out = []
        for s in w:
            if out and (out[-1], s) in pairs:
                out.pop()
            else:
                out.append(s)
        return tuple(out)
    steps = 0
    changed = True
    while changed:
        changed = False
        for i in range(len(w)):
            for l, r in rules:
                if w[i:i + len(l)] == l:
                    w = w[:i] + r + w[i + len(l):]
                    changed = True
                    break
            if changed:
                break
        steps += 1
        if steps > budget:
            raise NonterminatingRewrite(f"no normal form within {budget} steps")
    return w


@lru_cache(maxsize=None)
def _confluent_cached(group) -> bool:
    return group.is_confluent()


@lru_cache(maxsize=1 << 16)
def _step(group: SelfSimilarGroup, g: Word, x: int) -> tuple:
    sections = []
    for s in reversed(g):
        try:
            x, r = group.table[s][x]
        except KeyError:
            raise UnknownGenerator(s) from None
        sections.append(r)
    restriction = tuple(itertools.chain.from_iterable(reversed(sections)))
    return x, group.reduce(restriction)


def dihedral_closed_forms(n: int) -> list:
    """Closed-form first-level data of ``(ab)^m`` and ``(ba)^m`` words.

    Each entry ``(g, x, y, r)`` states ``g.x = y.r``. The ``(ba)`` family
    follows from the ``(ab)`` family by inverting ``g.x = y.r``.
    """
    ab = lambda m: ("a", "b") * m
    ba = lambda m: ("b", "a") * m
    return [
        (ab(2 * n), 0, 0, ba(n)),
        (ab(2 * n), 1, 1, ab(n)),
        (ab(2 * n + 1), 0, 1, ("a",) + ba(n)),
        (ab(2 * n + 1), 1, 0, ("b",) + ab(n)),
        (ab(2 * n) + ("a",), 0, 1, ab(n)),
        (ab(2 * n) + ("a",), 1, 0, ba(n)),
        (ab(2 * n + 1) + ("a",), 0, 0, ("b",) + ab(n)),
        (ab(2 * n + 1) + ("a",), 1, 1, ("a",) + ba(n)),
        (ba(2 * n), 0, 0, ab(n)),
        (ba(2 * n), 1, 1, ba(n)),
        (ba(2 * n + 1), 1, 0, ab(n) + ("a",)),
        (ba(2 * n + 1), 0, 1, ba(n) + ("b",)),
    ]


# -- definitions -------------------------------------------------------------

DIHEDRAL_TEXT = """\
# self-similar infinite dihedral group
alphabet 2
gen a : 0 -> 1 | e ; 1 -> 0 | e
gen b : 0 -> 0 | a ; 1 -> 1 | b
rel a a =
rel b b =
"""


def parse_group(text: str, name: str = "custom") -> SelfSimilarGroup:
    degree = None
    gens = {}
    rels = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        head, _, rest = line.partition(" ")
        try:
            if head == "alphabet":
                degree = int(rest)
            elif head == "gen":
                gname, _, body = rest.partition(":")
                gname = gname.strip()
                rows = {}
                for part in body.split(";"):
                    lhs, _, rhs = part.partition("->")
                    out, _, restr = rhs.partition("|")
                    rows[int(lhs)] = (int(out), restr.strip())
                gens[gname] = rows
            elif head == "rel":
                lhs, eq, rhs = rest.partition("=")
                if not eq:
                    raise ValueError("missing '='")
                rels.append((lhs.split(), rhs.split()))
            else:
                raise ValueError(f"unknown directive {head!r}")
        except ValueError as exc:
            raise GroupDefinitionError(f"line {lineno}: {exc}") from None
    if degree is None:
        raise GroupDefinitionError("missing 'alphabet' line")

    def restr_word(text):
        if text in ("", "e"):
            return ()
        if " " in text:
            return tuple(t for t in text.split() if t != "e")
        if text in gens:
            return (text,)
        return tuple(text)

    table = {}
    for g, rows in gens.items():
        if sorted(rows) != list(range(degree)):
            raise GroupDefinitionError(f"generator {g!r} must list every letter once")
        table[g] = tuple((rows[x][0], restr_word(rows[x][1])) for x in range(degree))
    rules = [(tuple(t for t in l if t != "e"), tuple(t for t in r if t != "e")) for l, r in rels]
    return SelfSimilarGroup(name, degree, table, tuple(rules))


@lru_cache(maxsize=None)
def dihedral() -> SelfSimilarGroup:
    return parse_group(DIHEDRAL_TEXT, DIHEDRAL)


BUILTIN = {DIHEDRAL: dihedral}


def load_group(source: str) -> SelfSimilarGroup:
    """A built-in group by name, or a group-definition file by path."""
    if source in BUILTIN:
        return BUILTIN[source]()
    with open(source, encoding="utf-8") as fh:
        return parse_group(fh.read(), name=source)


def trivial_group(degree: int = 2) -> SelfSimilarGroup:
    return SelfSimilarGroup("trivial", degree, {}, ())
