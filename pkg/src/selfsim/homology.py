"""Group homology with cylinder-function coefficients and its stabilization.

The acting group is a free product of involutions (the dihedral group is
``C2 * C2``), resolved by the 2-periodic complex

    d1(m_1, ..., m_r) = sum (A_i - I) m_i
    d_{2j}   = (I + A_1) + ... + (I + A_r)     (block diagonal)
    d_{2j+1} = (I - A_1) + ... + (I - A_r)

with coefficients in ``C_k``, the integer functions constant on depth-k
cylinders. Refinement ``C_k -> C_{k+1}`` and the first-letter connecting map
``C_{k+1} -> C_k`` give the stationary systems behind the stabilized groups.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np

from .abelian import (
    AbHom,
    Subquotient,
    hom_kernel_cokernel,
    identity,
    induced_hom,
    is_zero,
    matmul,
    subquotient,
    zeros,
)
from .colimit import (
    ColimitModel,
    LevelMap,
    StationarySystem,
    certify_colimit,
    colim_ker_coker,
    level_map,
)
from .errors import NotChainCompatible, Undetermined
from .group import SelfSimilarGroup, Word


def involution_generators(group: SelfSimilarGroup) -> tuple:
    """Generators, if the rules present a free product of involutions."""
    gens = group.generators
    inv = {l[0] for l, r in group.rules if len(l) == 2 and l[0] == l[1] and not r}
    if set(gens) != inv or len(group.rules) != len(gens):
        raise ValueError("the periodic resolution needs a free product of involutions")
    return gens


@dataclass(frozen=True)
class PermutationModule:
    group: SelfSimilarGroup
    depth: int
    generators: tuple
    perms: dict = field(repr=False)
    actions: dict = field(repr=False)

    @property
    def rank(self) -> int:
        return self.group.degree ** self.depth

    def matrix(self, g) -> np.ndarray:
        """Action matrix of a word (leftmost letter acts last)."""
        out = identity(self.rank)
        for s in reversed(tuple(g)):
            out = matmul(self.actions[s], out)
        return out

    def act_vector(self, g, f) -> np.ndarray:
        v = np.array(f, dtype=object)
        for s in reversed(tuple(g)):
            w = np.empty_like(v)
            w[list(self.perms[s])] = v
            v = w
        return v

    def indicator(self, prefix) -> np.ndarray:
        """``1_{Z(prefix)}`` as a depth-k vector (requires ``len(prefix) <= depth``)."""
        prefix = tuple(prefix)
        if len(prefix) > self.depth:
            raise ValueError("cylinder deeper than the module")
        d = self.group.degree
        span = d ** (self.depth - len(prefix))
        start = self.group.word_index(prefix) * span
        v = np.empty(self.rank, dtype=object)
        v.fill(0)
        v[start:start + span] = 1
        return v


def depth_module(group: SelfSimilarGroup, k: int) -> PermutationModule:
    group.require_word_problem()
    gens = involution_generators(group)
    perms, actions = {}, {}
    for s in gens:
        p = tuple(group.level_permutation((s,), k))
        m = zeros(len(p), len(p))
        for w, i in enumerate(p):
            m[i, w] = 1
        perms[s], actions[s] = p, m
    return PermutationModule(group, k, gens, perms, actions)


# -- the periodic resolution ---------------------------------------------------------


def _block_diag(blocks) -> np.ndarray:
    n = sum(b.shape[0] for b in blocks)
    m = sum(b.shape[1] for b in blocks)
    out = zeros(n, m)
    i = j = 0
    for b in blocks:
        out[i:i + b.shape[0], j:j + b.shape[1]] = b
        i, j = i + b.shape[0], j + b.shape[1]
    return out


def chain_rank(module: PermutationModule, p: int) -> int:
    return module.rank if p == 0 else module.rank * len(module.generators)


def boundary(module: PermutationModule, p: int) -> np.ndarray:
    """``d_p : C_p -> C_{p-1}``; ``d_0`` is the zero map to the zero module."""
    n = module.rank
    eye = identity(n)
    acts = [module.actions[s] for s in module.generators]
    if p == 0:
        return zeros(0, n)
    if p == 1:
        return np.concatenate([a - eye for a in acts], axis=1)
    sign = 1 if p % 2 == 0 else -1
    return _block_diag([eye + sign * a for a in acts])


def factor_homology(module: PermutationModule, s: str, p: int) -> Subquotient:
    """Homology of the cyclic factor generated by ``s`` in degree ``p``."""
    eye = identity(module.rank)
    a = module.actions[s]
    if p == 0:
        return subquotient(zeros(0, module.rank), a - eye)
    if p % 2:
        return subquotient(eye - a, eye + a)
    return subquotient(eye + a, eye - a)


def per_factor_vanishing(module: PermutationModule) -> dict:
    """``ker(I + A_s) == im(I - A_s)`` for each generator ``s``."""
    return {s: factor_homology(module, s, 2).group.is_trivial for s in module.generators}


def _normalize_h0(module: PermutationModule, sq: Subquotient) -> Subquotient:
    """Make every free generator of the coinvariants have positive augmentation."""
    lift, proj = sq.lift.copy(), sq.proj.copy()
    nt = len(sq.group.torsion)
    for i in range(nt, sq.group.ngens):
        if sum(lift[:, i]) < 0:
            lift[:, i] = -lift[:, i]
            proj[i, :] = -proj[i, :]
    return replace(sq, lift=lift, proj=proj)


def group_homology(module: PermutationModule, p: int) -> Subquotient:
    """``H_p`` of the acting group with coefficients in the module."""
    if p < 0:
        raise ValueError("degree must be nonnegative")
    sq = subquotient(boundary(module, p), boundary(module, p + 1))
    return _normalize_h0(module, sq) if p == 0 else sq


def refinement_matrix(group: SelfSimilarGroup, k: int) -> np.ndarray:
    """``C_k -> C_{k+1}``: ``1_{Z(w)} = sum_x 1_{Z(wx)}``."""
    d = group.degree
    n = d**k
    r = zeros(n * d, n)
    for w in range(n):
        for x in range(d):
            r[w * d + x, w] = 1
    return r


def refinement_chain_map(module: PermutationModule, p: int) -> np.ndarray:
    r = refinement_matrix(module.group, module.depth)
    return r if p == 0 else _block_diag([r] * len(module.generators))


def refinement_induced(module_k: PermutationModule, module_k1: PermutationModule, p: int,
                       sq_k: Subquotient = None, sq_k1: Subquotient = None) -> AbHom:
    sq_k = sq_k or group_homology(module_k, p)
    sq_k1 = sq_k1 or group_homology(module_k1, p)
    return induced_hom(refinement_chain_map(module_k, p), sq_k, sq_k1)


def fox_cycle(module: PermutationModule, g: Word, f) -> np.ndarray:
    """Resolution coordinates of the germ class of ``g`` over the function ``f``.

    The slot of the ``i``-th letter of ``g`` receives ``f`` moved by the
    letters to its right, so ``d1`` of the result is ``A_g f - f``.
    """
    gens = module.generators
    n = module.rank
    out = np.empty(n * len(gens), dtype=object)
    out.fill(0)
    v = np.array(f, dtype=object)
    for s in reversed(tuple(g)):
        j = gens.index(s)
        out[j * n:(j + 1) * n] += v
        v = module.act_vector((s,), v)
    return out


def connecting_chain_map(module_k1: PermutationModule, module_k: PermutationModule, p: int) -> np.ndarray:
    """Chain-level map ``C_{k+1} -> C_k`` that consumes the first letter.

    Degree 0 sends ``1_{Z(x b)}`` to ``1_{Z(b)}``; degree 1 sends the class of
    ``s`` over ``Z(x b)`` to the class of ``s|x`` over ``Z(b)``.
    """
    group = module_k.group
    d, n = group.degree, module_k.rank
    if p == 0:
        t = zeros(n, n * d)
        for x in range(d):
            for b in range(n):
                t[b, x * n + b] = 1
        return t
    if p == 1:
        gens = module_k.generators
        t = zeros(n * len(gens), n * d * len(gens))
        for j, s in enumerate(gens):
            for x in range(d):
                _, restr = group.step((s,), x)
                for b in range(n):
                    e = np.empty(n, dtype=object)
                    e.fill(0)
                    e[b] = 1
                    t[:, j * n * d + x * n + b] = fox_cycle(module_k, restr, e)
        return t
    raise ValueError("the connecting chain map is only modelled in degrees 0 and 1")


def connecting_induced(module_k1, module_k, p: int, sq_k1=None, sq_k=None) -> AbHom:
    sq_k1 = sq_k1 or group_homology(module_k1, p)
    sq_k = sq_k or group_homology(module_k, p)
    if p >= 2:
        if sq_k.group.is_trivial or sq_k1.group.is_trivial:
            return AbHom(sq_k1.group, sq_k.group, zeros(sq_k.group.ngens, sq_k1.group.ngens))
        raise Undetermined(f"no chain-level connecting map in degree {p} for nonzero homology")
    t = connecting_chain_map(module_k1, module_k, p)
    if p == 1:
        lhs = matmul(boundary(module_k, 1), t)
        rhs = matmul(connecting_chain_map(module_k1, module_k, 0), boundary(module_k1, 1))
        if not is_zero(lhs - rhs):
            raise NotChainCompatible("connecting map does not commute with d1")
    return induced_hom(t, sq_k1, sq_k)


# -- colimit over depth ---------------------------------------------------------------


@dataclass
class DepthColimit:
    degree: int
    groups: list  # FGAbelianGroup per depth
    maps: list  # refinement matrices
    stable_from: int
    label: str
    model: ColimitModel = None
    certified: bool = True
    note: str = ""


def homology_colimit(group: SelfSimilarGroup, p: int, max_depth: int = 8, min_depth: int = 0) -> DepthColimit:
    """``H_p`` with coefficients in all cylinder functions, read off the depth tower.

    The tower is accepted as stationary when groups and refinement matrices
    agree from some depth on through ``max_depth``.
    """
    mods = [depth_module(group, k) for k in range(min_depth, max_depth + 1)]
    sqs = [group_homology(m, p) for m in mods]
    maps = [refinement_induced(mods[i], mods[i + 1], p, sqs[i], sqs[i + 1]) for i in range(len(mods) - 1)]
    groups = [sq.group for sq in sqs]
    mats = [m.matrix for m in maps]
    start = len(mats) - 1
    while start > 0 and groups[start - 1] == groups[start] and np.array_equal(mats[start - 1], mats[start]):
        start -= 1
    if start == len(mats) - 1 and len(mats) > 1:
        if all(_is_iso(m) for m in maps[-2:]):
            return DepthColimit(p, groups, mats, min_depth + len(groups) - 1, str(groups[-1]),
                                note="refinement maps are isomorphisms at the top depths")
        raise Undetermined(f"depth tower for H_{p} is not stationary by depth {max_depth}",
                           {"groups": [str(g) for g in groups]})
    if not mats:
        return DepthColimit(p, groups, mats, min_depth, str(groups[0]), certified=False,
                            note="single depth, nothing to stabilize")
    system = StationarySystem(groups[start], maps[start])
    model = certify_colimit(system)
    return DepthColimit(p, groups, mats, min_depth + start, model.label, model=model)


def _is_iso(h: AbHom) -> bool:
    if h.source != h.target:
        return False
    k, _, c, _ = hom_kernel_cokernel(h.matrix, h.source, h.target)
    return k.is_trivial and c.is_trivial


# -- stabilized homology ----------------------------------------------------------------


@dataclass
class StabilizedHomology:
    degree: int
    depth: int
    level_homology: Subquotient
    system: StationarySystem
    model: ColimitModel
    sigma: LevelMap
    connector_chain: np.ndarray = field(repr=False, default=None)

    @property
    def label(self) -> str:
        return self.model.label

    def generator_cycles(self) -> list:
        """Ambient lifts of the model generators, as ``(kind, level, cycle)``."""
        out = []
        for kind, count in (("dyadic", self.model.dyadic_rank), ("free", self.model.free_rank),
                            ("torsion", self.model.ntors)):
            for i in range(count):
                e = self.model.generator(kind, i)
                cyc = matmul(self.level_homology.lift, np.array(e.rep, dtype=object).reshape(-1, 1)).ravel()
                out.append((kind, e.level, cyc))
        return out


def stabilized_homology(group: SelfSimilarGroup, p: int, depth: int = 1) -> StabilizedHomology:
    """``H_p`` of the stabilized groupoid as a colimit over the levels ``n``.

    At a fixed coefficient depth the level connector is the first-letter
    connecting map after one refinement; ``sigma`` raises the level by one.
    """
    if p < 0 or p > 2:
        raise ValueError("stabilized homology is modelled in degrees 0, 1, 2")
    mk, mk1 = depth_module(group, depth), depth_module(group, depth + 1)
    sqk, sqk1 = group_homology(mk, p), group_homology(mk1, p)
    try:
        ref = refinement_induced(mk, mk1, p, sqk, sqk1)
        con = connecting_induced(mk1, mk, p, sqk1, sqk)
    except NotChainCompatible as exc:
        raise Undetermined(f"degree {p}: {exc}", {"witness": str(exc.witness)}) from exc
    connector = con.compose(ref)
    system = StationarySystem(sqk.group, connector, name=f"H{p}")
    model = certify_colimit(system)
    chain = matmul(connecting_chain_map(mk1, mk, p), refinement_chain_map(mk, p)) if p < 2 else None
    sigma = LevelMap(1, identity(sqk.group.ngens))
    return StabilizedHomology(p, depth, sqk, system, model, sigma, chain)


def one_minus_sigma(stab: StabilizedHomology) -> LevelMap:
    n = stab.system.rank
    return level_map(stab.system, [(1, 0, identity(n)), (-1, stab.sigma.shift, stab.sigma.matrix)])


@dataclass
class LESEntry:
    degree: int
    status: str  # "RESOLVED" or "UNDETERMINED"
    label: str
    coker_part: str
    ker_part: str
    generators: list = field(default_factory=list)
    note: str = ""
    rank: int = 0  # rational rank, additive across the extension


def les_assemble(stabs: dict) -> list:
    """Read ``H_p`` of the groupoid off ``0 -> coker(1-s_p) -> H_p -> ker(1-s_{p-1}) -> 0``."""
    kc = {}
    for p, st in sorted(stabs.items()):
        kc[p] = colim_ker_coker(one_minus_sigma(st), st.system, st.model)
    out = []
    for p in sorted(stabs):
        coker = kc[p][1]
        ker = kc[p - 1][0] if p - 1 in kc else None
        ker_label = ker.label if ker is not None else "0"
        rank = coker.dyadic_rank + coker.free_rank
        if ker is not None:
            rank += ker.dyadic_rank + ker.free_rank
        if ker is None or ker.is_trivial:
            entry = LESEntry(p, "RESOLVED", coker.label, coker.label, ker_label,
                             [("coker", k, y) for k, y, _ in coker.generators])
        elif coker.is_trivial:
            entry = LESEntry(p, "RESOLVED", ker.label, coker.label, ker_label,
                             [("ker", k, y) for k, y, _ in ker.generators])
        else:
            entry = LESEntry(p, "UNDETERMINED", "?", coker.label, ker_label, note="extension problem")
        entry.rank = rank
        out.append(entry)
    return out


def torsion_flags(group: SelfSimilarGroup, degrees=range(3, 7), max_depth: int = 8) -> dict:
    """Whether ``2 H_p = 0`` with depth-k coefficients for every ``k <= max_depth``."""
    out = {}
    for p in degrees:
        ok = True
        for k in range(max_depth + 1):
            g = group_homology(depth_module(group, k), p).group
            if g.free_rank or any(d != 2 for d in g.torsion):
                ok = False
                break
        out[p] = ok
    return out


def mayer_vietoris_check(module: PermutationModule) -> dict:
    """Rank and order bookkeeping for ``0 -> H1(A)+H1(B) -> H1(G) -> M -> M_A+M_B -> M_G -> 0``."""
    h1 = group_homology(module, 1).group
    f1 = [factor_homology(module, s, 1).group for s in module.generators]
    f0 = [factor_homology(module, s, 0).group for s in module.generators]
    h0 = group_homology(module, 0).group
    alt = sum(g.free_rank for g in f1) - h1.free_rank + module.rank - sum(g.free_rank for g in f0) + h0.free_rank
    orders_ok = True
    if h1.is_finite:
        prod = 1
        for g in f1:
            for d in g.torsion:
                prod *= d
        h1_order = 1
        for d in h1.torsion:
            h1_order *= d
        orders_ok = all(g.is_finite for g in f1) and prod == h1_order
    return {"rank_alternating_sum": alt, "orders_ok": orders_ok, "ok": alt == 0 and orders_ok}
