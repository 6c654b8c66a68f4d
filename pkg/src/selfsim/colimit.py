"""Direct limits of a finitely generated abelian group along one endomorphism.

An element ``(n, v)`` lives at level ``n`` and is identified with
``(n + 1, A v)``. Equality is decided through the ascending chain of lattices
``L_t = {x : A^t x = 0 in G}``, which becomes constant once two consecutive
terms agree.

Certification writes the colimit as ``Z[1/2]^s + Z^r + T`` by an explicit
coordinate map ``to_model`` with inverse ``from_model``; anything outside that
catalog raises :class:`Undetermined`.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property

import numpy as np
import sympy

from .abelian import (
    AbHom,
    FGAbelianGroup,
    det,
    group_label,
    hom_kernel_cokernel,
    identity,
    image_basis,
    int_matrix,
    is_zero,
    kernel_basis,
    matmul,
    snf,
    solve,
    subquotient,
    vector,
    zeros,
)
from .errors import NotCompatible, Undetermined

# -- dyadic helpers -------------------------------------------------------------


def log2_denominator(q: Fraction) -> int:
    """``k`` with ``q = m / 2^k``; raises Undetermined for other denominators."""
    d = Fraction(q).denominator
    k = d.bit_length() - 1
    if d != 1 << k:
        raise Undetermined(f"{q} is not dyadic")
    return k


def frac_array(m) -> np.ndarray:
    arr = np.array(m, dtype=object)
    out = np.empty(arr.shape, dtype=object)
    for idx, v in np.ndenumerate(arr):
        out[idx] = Fraction(v)
    return out


def is_integral(m: np.ndarray) -> bool:
    return all(Fraction(v).denominator == 1 for v in np.ravel(m))


def to_int(m: np.ndarray) -> np.ndarray:
    out = np.empty(m.shape, dtype=object)
    for idx, v in np.ndenumerate(m):
        out[idx] = int(Fraction(v))
    return out


def rational_inverse(m: np.ndarray) -> np.ndarray:
    n = m.shape[0]
    a = [[Fraction(v) for v in row] + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(m)]
    for c in range(n):
        p = next((r for r in range(c, n) if a[r][c] != 0), None)
        if p is None:
            raise ZeroDivisionError("singular matrix")
        a[c], a[p] = a[p], a[c]
        inv = 1 / a[c][c]
        a[c] = [v * inv for v in a[c]]
        for r in range(n):
            if r != c and a[r][c] != 0:
                f = a[r][c]
                a[r] = [x - f * y for x, y in zip(a[r], a[c])]
    return frac_array([row[n:] for row in a]).reshape(n, n)


def _mv(m: np.ndarray, v) -> np.ndarray:
    v = np.array(list(v), dtype=object)
    if m.shape[1] == 0:
        out = np.empty(m.shape[0], dtype=object)
        out.fill(0)
        return out
    return np.dot(m, v)


# -- systems ----------------------------------------------------------------------


@dataclass(frozen=True)
class ColimitElement:
    level: int
    rep: tuple

    def __post_init__(self):
        if self.level < 0:
            raise ValueError("levels are nonnegative")
        object.__setattr__(self, "rep", tuple(int(x) for x in self.rep))


@dataclass(eq=False)
class StationarySystem:
    group: FGAbelianGroup
    connector: AbHom
    name: str = ""

    def __post_init__(self):
        if self.connector.source != self.group or self.connector.target != self.group:
            raise ValueError("connector must be an endomorphism of the level group")

    @classmethod
    def from_matrix(cls, group: FGAbelianGroup, matrix, name: str = "") -> "StationarySystem":
        return cls(group, AbHom(group, group, int_matrix(matrix, shape=(group.ngens, group.ngens))), name)

    @property
    def rank(self) -> int:
        return self.group.ngens

    def element(self, level: int, rep) -> ColimitElement:
        return ColimitElement(level, tuple(self.group.canonical(rep)))

    def basis_element(self, level: int, i: int) -> ColimitElement:
        v = [0] * self.rank
        v[i] = 1
        return self.element(level, v)

    def zero(self, level: int = 0) -> ColimitElement:
        return self.element(level, [0] * self.rank)

    def push(self, e: ColimitElement, level: int) -> ColimitElement:
        if level < e.level:
            raise ValueError("cannot push to a lower level")
        v = vector(e.rep)
        for _ in range(level - e.level):
            v = self.connector(v)
        return ColimitElement(level, tuple(v))

    def power(self, t: int) -> np.ndarray:
        cache = self.__dict__.setdefault("_powers", [identity(self.rank)])
        while len(cache) <= t:
            cache.append(matmul(self.connector.matrix, cache[-1]))
        return cache[t]

    def kernel_lattice(self, t: int) -> np.ndarray:
        """Basis (columns) of ``{x in Z^g : A^t x in relations}``."""
        g = self.rank
        rel = self.group.relation_matrix()
        block = np.concatenate([self.power(t), rel], axis=1) if rel.shape[1] else self.power(t)
        if g == 0:
            return zeros(0, 0)
        gens = kernel_basis(block)[:g, :]
        return image_basis(gens) if gens.shape[1] else zeros(g, 0)

    @cached_property
    def stabilization(self) -> int:
        """Least ``t`` with ``L_t = L_{t+1}``; the chain is constant from there on."""
        t = 0
        cur = self.kernel_lattice(0)
        while True:
            nxt = self.kernel_lattice(t + 1)
            if all(solve(cur, nxt[:, j]) is not None for j in range(nxt.shape[1])) if cur.shape[1] else nxt.shape[1] == 0:
                return t
            t, cur = t + 1, nxt

    @cached_property
    def eventual_kernel(self) -> np.ndarray:
        return self.kernel_lattice(self.stabilization)

    def is_zero(self, e: ColimitElement) -> bool:
        v = vector(e.rep)
        if self.rank == 0:
            return True
        k = self.eventual_kernel
        if k.shape[1] == 0:
            return not np.any(v != 0)
        return solve(k, v) is not None

    def colim_equal(self, e1: ColimitElement, e2: ColimitElement) -> bool:
        m = max(e1.level, e2.level)
        a, b = self.push(e1, m), self.push(e2, m)
        return self.is_zero(ColimitElement(m, tuple(vector(a.rep) - vector(b.rep))))

    def combine(self, terms) -> ColimitElement:
        """The integer combination ``sum c_i e_i`` at the highest level involved."""
        terms = list(terms)
        if not terms:
            return self.zero()
        m = max(e.level for _, e in terms)
        total = vector([0] * self.rank)
        for c, e in terms:
            total = total + int(c) * vector(self.push(e, m).rep)
        return self.element(m, total)

    def verify_relation(self, terms) -> bool:
        return self.is_zero(self.combine(terms))

    def brute_equal(self, e1: ColimitElement, e2: ColimitElement, extra: int = 40) -> bool:
        """Comparison after pushing far past both levels; used as an oracle."""
        m = max(e1.level, e2.level) + extra
        a, b = self.push(e1, m), self.push(e2, m)
        return self.group.is_zero_element(vector(a.rep) - vector(b.rep))


def colim_equal(system: StationarySystem, e1: ColimitElement, e2: ColimitElement) -> bool:
    return system.colim_equal(e1, e2)


def verify_relation(system: StationarySystem, terms) -> bool:
    return system.verify_relation(terms)


# -- level-shifted endomorphisms ------------------------------------------------------


@dataclass(frozen=True)
class LevelMap:
    """``(n, v) -> (n + shift, matrix v)``; shift may be negative."""

    shift: int
    matrix: np.ndarray

    def apply(self, system: StationarySystem, e: ColimitElement) -> ColimitElement:
        if e.level + self.shift < 0:
            e = system.push(e, -self.shift)
        return system.element(e.level + self.shift, matmul(self.matrix, vector(e.rep).reshape(-1, 1)).ravel())


def level_map(system: StationarySystem, terms) -> LevelMap:
    """Normalize ``sum c_i (n + s_i, B_i v)`` to a single shift and check compatibility."""
    terms = [(int(c), int(s), int_matrix(b, shape=(system.rank, system.rank))) for c, s, b in terms]
    top = max(s for _, s, _ in terms)
    total = zeros(system.rank, system.rank)
    for c, s, b in terms:
        total = total + c * matmul(system.power(top - s), b)
    h = LevelMap(top, total)
    check_compatible(system, h)
    return h


def check_compatible(system: StationarySystem, h: LevelMap) -> None:
    """``B A = A B`` on generators, compared in the colimit."""
    g = system.group
    try:
        AbHom(g, g, h.matrix)
    except ValueError as exc:
        raise NotCompatible(f"level map is not well defined: {exc}") from exc
    a = system.connector.matrix
    ba, ab = matmul(h.matrix, a), matmul(a, h.matrix)
    for j in range(system.rank):
        if not system.colim_equal(system.element(0, ba[:, j]), system.element(0, ab[:, j])):
            raise NotCompatible(f"level map does not commute with the connector on generator {j}")


# -- certified models -------------------------------------------------------------------


@dataclass(eq=False)
class ColimitModel:
    """Coordinates ``Z[1/2]^s + Z^r + T`` for the colimit of a stationary system.

    ``to_model`` lists dyadic coordinates, then free, then torsion.
    """

    system: StationarySystem
    dyadic_rank: int
    free_rank: int
    torsion: tuple
    quotient: object  # Subquotient of Z^g by the eventual kernel
    P: np.ndarray
    P_inv: np.ndarray
    S: np.ndarray
    S_inv: np.ndarray
    tors_auto: np.ndarray
    tors_auto_inv: np.ndarray
    witness: dict = field(default_factory=dict)

    @property
    def label(self) -> str:
        return group_label(self.free_rank, self.torsion, self.dyadic_rank)

    @property
    def nfree(self) -> int:
        return self.dyadic_rank + self.free_rank

    @property
    def ntors(self) -> int:
        return len(self.torsion)

    @property
    def torsion_group(self) -> FGAbelianGroup:
        return FGAbelianGroup(0, self.torsion)

    def to_model(self, e: ColimitElement) -> tuple:
        q = self.quotient.project(e.rep)
        t, f = q[: self.ntors], q[self.ntors:]
        y = _mv(self.P, f)
        for _ in range(e.level):
            y = _mv(self.S_inv, y)
        tv = vector(t)
        for _ in range(e.level):
            tv = self.torsion_group.canonical(_mv(self.tors_auto_inv, tv))
        return tuple(Fraction(x) for x in y) + tuple(int(x) for x in tv)

    def from_model(self, y, min_level: int = 0) -> ColimitElement:
        y = list(y)
        yf = np.array([Fraction(v) for v in y[: self.nfree]], dtype=object)
        yt = vector([int(v) for v in y[self.nfree:]])
        for j in range(self.dyadic_rank, self.nfree):
            if yf[j].denominator != 1:
                raise ValueError("free coordinates must be integers")
        n = 0
        while n < min_level:
            yf, n = _mv(self.S, yf), n + 1
        bound = min_level + 64 + 4 * sum(log2_denominator(v) for v in yf)
        while not is_integral(yf):
            if n > bound:
                raise Undetermined("could not bring model vector to an integral level")
            yf, n = _mv(self.S, yf), n + 1
        f = _mv(self.P_inv, to_int(yf)) if self.nfree else vector([])
        tv = yt
        for _ in range(n):
            tv = self.torsion_group.canonical(_mv(self.tors_auto, tv))
        q = np.concatenate([tv, f]) if len(tv) or len(f) else vector([])
        rep = matmul(self.quotient.lift, q.reshape(-1, 1)).ravel() if len(q) else vector([0] * self.system.rank)
        return self.system.element(n, rep)

    def generator(self, kind: str, i: int, scale: int = 0) -> ColimitElement:
        """Model basis vector; dyadic generators can be divided by ``2**scale``."""
        y = [Fraction(0)] * self.nfree + [0] * self.ntors
        if kind == "dyadic":
            y[i] = Fraction(1, 2**scale)
        elif kind == "free":
            y[self.dyadic_rank + i] = Fraction(1)
        elif kind == "torsion":
            y[self.nfree + i] = 1
        else:
            raise ValueError(kind)
        return self.from_model(y)

    def in_catalog(self, y) -> bool:
        y = list(y)
        return all(Fraction(y[self.dyadic_rank + j]).denominator == 1 for j in range(self.free_rank))

    def verify(self, max_level: int = 12) -> dict:
        """Check relations and surjectivity of the model on levels up to ``max_level``."""
        sysm = self.system
        report = {"levels_checked": max_level, "round_trip": True, "relations": True, "injective": True}
        for k in range(max_level):
            for i in range(self.dyadic_rank):
                g0, g1 = self.generator("dyadic", i, k), self.generator("dyadic", i, k + 1)
                if not sysm.verify_relation([(1, g0), (-2, g1)]):
                    report["relations"] = False
        for i, d in enumerate(self.torsion):
            g = self.generator("torsion", i)
            if not sysm.verify_relation([(d, g)]) or sysm.is_zero(sysm.combine([(d // min_prime(d), g)])):
                report["relations"] = False
        for n in range(max_level + 1):
            for i in range(sysm.rank):
                e = sysm.basis_element(n, i)
                y = self.to_model(e)
                if not self.in_catalog(y) or not sysm.colim_equal(self.from_model(y), e):
                    report["round_trip"] = False
                if any(v != 0 for v in y) == sysm.is_zero(e):
                    report["injective"] = False
        report["ok"] = report["round_trip"] and report["relations"] and report["injective"]
        return report


def min_prime(d: int) -> int:
    p = 2
    while d % p:
        p += 1
    return p


def _block_is_zero_mod(m: np.ndarray, torsion: tuple) -> bool:
    return all(int(m[i, j]) % d == 0 for i, d in enumerate(torsion) for j in range(m.shape[1]))


def _split_char_poly(b: np.ndarray):
    """``(f, g)`` as sympy Polys with f dyadic-expanding and g unimodular."""
    x = sympy.Symbol("x")
    n = b.shape[0]
    if n == 0:
        return sympy.Poly(1, x), sympy.Poly(1, x)
    chi = sympy.Matrix(n, n, [int(v) for v in b.ravel()]).charpoly(x)
    _, factors = sympy.factor_list(chi.as_expr(), x)
    f, g = sympy.Poly(1, x), sympy.Poly(1, x)
    for fac, mult in factors:
        p = sympy.Poly(fac, x)
        coeffs = [int(c) for c in p.all_coeffs()]
        const = coeffs[-1]
        if abs(const) == 1:
            g *= p**mult
            continue
        power2 = const != 0 and abs(const) & (abs(const) - 1) == 0
        if power2 and all(c % 2 == 0 for c in coeffs[1:]):
            f *= p**mult
            continue
        raise Undetermined(f"characteristic factor {p.as_expr()} fits no catalog model", {"factor": str(p.as_expr())})
    return f, g


def _poly_at(p, b: np.ndarray) -> np.ndarray:
    out = zeros(*b.shape)
    for c in p.all_coeffs():
        out = matmul(b, out) + int(c) * identity(b.shape[0])
    return out


def _order_and_inverse(m: np.ndarray, group: FGAbelianGroup):
    """Inverse of an automorphism of a finite group by iterating powers."""
    n = group.ngens
    if n == 0:
        return zeros(0, 0)
    hom = AbHom(group, group, m)
    p = hom
    prev = AbHom(group, group, identity(n))
    for _ in range(10_000):
        if p.is_identity():
            return prev.matrix
        prev, p = p, p.compose(hom)
    raise Undetermined("torsion automorphism of unexpectedly large order")


def certify_colimit(system: StationarySystem) -> ColimitModel:
    g = system.rank
    kern = system.eventual_kernel
    quot = subquotient(zeros(0, g), kern) if g else subquotient(zeros(0, 0), zeros(0, 0))
    gq = quot.group
    a = matmul(quot.proj, matmul(system.connector.matrix, quot.lift)) if g else zeros(0, 0)
    nt = len(gq.torsion)
    if not _block_is_zero_mod(a[:nt, nt:], gq.torsion):
        raise Undetermined("torsion and free parts of the colimit are mixed", {"quotient": str(gq)})
    at = a[:nt, :nt]
    b = a[nt:, nt:]
    f, _ = _split_char_poly(b)
    s = f.degree()
    fb = _poly_at(f, b)
    kb = kernel_basis(fb) if b.size else zeros(0, 0)
    if kb.shape[1] != s:
        raise Undetermined("dyadic eigenspace has unexpected rank")
    if s:
        res = snf(kb)
        P, P_inv = res.U, res.U_inv
    else:
        P, P_inv = identity(b.shape[0]), identity(b.shape[0])
    S = matmul(P, matmul(b, P_inv))
    if not is_zero(S[s:, :s]):
        raise Undetermined("dyadic subspace is not invariant")
    r = b.shape[0] - s
    if r:
        if abs(det(S[s:, s:])) != 1:
            raise Undetermined("integral block is not invertible")
    S_inv = rational_inverse(frac_array(S)) if S.size else frac_array(zeros(0, 0))
    tors = FGAbelianGroup(0, gq.torsion)
    model = ColimitModel(
        system=system,
        dyadic_rank=s,
        free_rank=r,
        torsion=gq.torsion,
        quotient=quot,
        P=P,
        P_inv=P_inv,
        S=frac_array(S),
        S_inv=S_inv,
        tors_auto=at,
        tors_auto_inv=_order_and_inverse(at, tors),
        witness={
            "stabilization": system.stabilization,
            "char_poly_dyadic": str(f.as_expr()),
            "eventual_kernel_rank": int(kern.shape[1]),
        },
    )
    return model


# -- kernel and cokernel of a level map -----------------------------------------------------


@dataclass
class ColimitDescriptor:
    """A certified catalog group with generators given as colimit elements."""

    dyadic_rank: int
    free_rank: int
    torsion: tuple
    generators: list  # (kind, model vector, ColimitElement)
    witness: dict = field(default_factory=dict)

    @property
    def label(self) -> str:
        return group_label(self.free_rank, self.torsion, self.dyadic_rank)

    @property
    def is_trivial(self) -> bool:
        return self.dyadic_rank == 0 and self.free_rank == 0 and not self.torsion


def model_matrix(model: ColimitModel, h: LevelMap):
    """``(H_free, H_torsion)`` describing ``h`` in model coordinates."""
    sysm = model.system
    q = model.quotient
    nt = model.ntors
    kern = sysm.eventual_kernel
    if kern.shape[1]:
        moved = matmul(q.proj, matmul(h.matrix, kern))
        for j in range(moved.shape[1]):
            if not q.group.is_zero_element(moved[:, j]):
                raise Undetermined("level map does not preserve the eventual kernel")
    bq = matmul(q.proj, matmul(h.matrix, q.lift)) if sysm.rank else zeros(0, 0)
    if not _block_is_zero_mod(bq[:nt, nt:], model.torsion):
        raise Undetermined("level map mixes free and torsion parts")
    bf = frac_array(matmul(model.P, matmul(bq[nt:, nt:], model.P_inv)))
    bt = bq[:nt, :nt]
    k = h.shift
    step_f = model.S_inv if k >= 0 else model.S
    step_t = model.tors_auto_inv if k >= 0 else model.tors_auto
    for _ in range(abs(k)):
        bf = np.dot(step_f, bf) if bf.size else bf
        bt = matmul(step_t, bt) if bt.size else bt
    return bf, bt


def _mod_dyadic(q: Fraction, m: int) -> int:
    return (q.numerator * pow(q.denominator, -1, m)) % m


def _free_ker_coker(H: np.ndarray, s: int, r: int):
    """Kernel and cokernel of a block-triangular map on ``Z[1/2]^s + Z^r``."""
    if any(v != 0 for v in np.ravel(H[s:, :s])):
        raise Undetermined("model map sends dyadic part to the integral part")
    for v in np.ravel(H[:s, :]):
        log2_denominator(v)
    h22 = H[s:, s:]
    if not is_integral(h22):
        raise Undetermined("integral block of model map is not integral")
    h22 = to_int(h22)
    h11, h12 = H[:s, :s], H[:s, s:]
    e = max((log2_denominator(v) for v in np.ravel(h11)), default=0)
    M = to_int(h11 * (1 << e)) if s else zeros(0, 0)
    if s:
        res = snf(M)
        U, U_inv, V = res.U, res.U_inv, res.V
        diag = res.diagonal
    else:
        U = U_inv = V = zeros(0, 0)
        diag = []
    rho = sum(1 for d in diag if d)
    odd = [d >> ((d & -d).bit_length() - 1) for d in diag[:rho]]

    # kernel
    N = kernel_basis(h22) if r else zeros(0, 0)
    q = N.shape[1]
    ker_gens = []
    for i in range(rho, s):
        d = [Fraction(int(V[k, i])) for k in range(s)]
        ker_gens.append(("dyadic", d + [Fraction(0)] * r))
    if q:
        c = -np.dot(h12, frac_array(N)) if s else frac_array(zeros(0, q))
        uc = np.dot(frac_array(U), c) if s else c
        big = max((log2_denominator(v) for v in np.ravel(uc)), default=0)
        cint = to_int(uc * (1 << big)) if s else zeros(0, q)
        cong = zeros(s, rho)
        for i in range(rho):
            cong[i, i] = odd[i]
        block = np.concatenate([cint, cong], axis=1) if s else zeros(0, q)
        W = identity(q) if not s else kernel_basis(block)[:q, :]
        W = image_basis(W) if W.shape[1] else W
        for j in range(W.shape[1]):
            w = W[:, j]
            u = _mv(uc, w)
            dp = [Fraction(u[i]) * (1 << e) / diag[i] if i < rho else Fraction(0) for i in range(s)]
            d = list(_mv(frac_array(V), dp)) if s else []
            z = [Fraction(int(x)) for x in _mv(N, w)]
            ker_gens.append(("free", d + z))
    for _, y in ker_gens:
        if any(v != 0 for v in _mv(H, y)):
            raise AssertionError("kernel generator is not in the kernel")

    # cokernel
    tors_idx = [i for i in range(rho) if odd[i] > 1]
    nrel = len(tors_idx) + r
    rels = []
    for i in tors_idx:
        col = [0] * nrel
        col[tors_idx.index(i)] = odd[i]
        rels.append(col)
    for j in range(r):
        u = _mv(frac_array(U), h12[:, j]) if s else []
        if any(u[i] != 0 for i in range(rho, s)):
            raise Undetermined("cokernel contains a quotient of Z[1/2] outside the catalog")
        rels.append([_mod_dyadic(Fraction(u[i]), odd[i]) for i in tors_idx] + [int(h22[k, j]) for k in range(r)])
    relm = int_matrix(rels, shape=(len(rels), nrel)).T if rels else zeros(nrel, 0)
    sq = subquotient(zeros(0, nrel), relm)

    def project(y):
        y = [Fraction(v) for v in y]
        u = _mv(frac_array(U), y[:s]) if s else []
        dy = [Fraction(u[i]) for i in range(rho, s)]
        fg = [_mod_dyadic(Fraction(u[i]), odd[i]) for i in tors_idx] + [int(v) for v in y[s:]]
        return dy, (tuple(int(x) for x in sq.project(fg)) if nrel else ())

    cok_gens = []
    for i in range(rho, s):
        d = [Fraction(int(U_inv[k, i])) for k in range(s)]
        cok_gens.append(("dyadic", d + [Fraction(0)] * r))
    for j in range(sq.group.ngens):
        ell = sq.lift[:, j]
        u = [0] * s
        for t, i in enumerate(tors_idx):
            u[i] = int(ell[t])
        d = [Fraction(int(x)) for x in _mv(U_inv, u)] if s else []
        kind = "torsion" if j < len(sq.group.torsion) else "free"
        cok_gens.append((kind, d + [Fraction(int(x)) for x in ell[len(tors_idx):]]))
    ker = (s - rho, sum(1 for g in ker_gens if g[0] == "free"), ())
    cok = (s - rho, sq.group.free_rank, sq.group.torsion)
    return ker, ker_gens, cok, cok_gens, project


def colim_ker_coker(h: LevelMap, system: StationarySystem, model: ColimitModel = None, max_level: int = 12):
    """Certified kernel and cokernel of a level map on the colimit."""
    check_compatible(system, h)
    model = model or certify_colimit(system)
    hf, ht = model_matrix(model, h)
    s, r = model.dyadic_rank, model.free_rank
    ker, ker_gens, cok, cok_gens, project = _free_ker_coker(hf, s, r)
    tg = model.torsion_group
    tker, tker_gens, tcok, tcok_gens = hom_kernel_cokernel(ht, tg, tg) if model.ntors else (
        FGAbelianGroup(0), zeros(0, 0), FGAbelianGroup(0), zeros(0, 0))
    zero_f = [Fraction(0)] * model.nfree

    def full(kind, y):
        return (kind, tuple(y) + (0,) * model.ntors)

    kgens = [full(k, y) for k, y in ker_gens]
    kgens += [("torsion", tuple(zero_f) + tuple(int(x) for x in tker_gens[:, j])) for j in range(tker.ngens)]
    cgens = [full(k, y) for k, y in cok_gens]
    cgens += [("torsion", tuple(zero_f) + tuple(int(x) for x in tcok_gens[:, j])) for j in range(tcok.ngens)]
    ker_torsion = tuple(sorted(tker.torsion))
    cok_torsion = _merge_torsion(cok[2], tcok.torsion)
    kernel = ColimitDescriptor(ker[0], ker[1], ker_torsion, [(k, y, model.from_model(y)) for k, y in kgens])
    coker = ColimitDescriptor(cok[0], cok[1], cok_torsion, [(k, y, model.from_model(y)) for k, y in cgens])
    kernel.witness = _verify_kernel(system, h, kernel)
    coker.witness = _verify_coker(model, hf, project, coker, max_level)
    coker.witness["torsion_part"] = str(tcok)
    return kernel, coker


def _merge_torsion(a: tuple, b: tuple) -> tuple:
    if not b:
        return tuple(a)
    if not a:
        return tuple(b)
    n = len(a) + len(b)
    rel = zeros(n, n)
    for i, d in enumerate(tuple(a) + tuple(b)):
        rel[i, i] = d
    return subquotient(zeros(0, n), rel).group.torsion


def _verify_kernel(system, h, kernel: ColimitDescriptor) -> dict:
    out = {"generators_in_kernel": True, "torsion_orders": True}
    for kind, _, e in kernel.generators:
        if not system.is_zero(h.apply(system, e)):
            out["generators_in_kernel"] = False
        if kind == "free" and system.is_zero(e):
            out["generators_in_kernel"] = False
    tors = [g for g in kernel.generators if g[0] == "torsion"]
    for (_, _, e), d in zip(tors, kernel.torsion):
        if not system.verify_relation([(d, e)]):
            out["torsion_orders"] = False
    out["ok"] = out["generators_in_kernel"] and out["torsion_orders"]
    return out


def _verify_coker(model, hf, project, coker: ColimitDescriptor, max_level: int) -> dict:
    """The projection kills the image of every level basis element and splits the generators."""
    sysm = model.system
    out = {"image_killed": True, "sections": True, "levels_checked": max_level}
    nf = model.nfree
    for n in range(max_level + 1):
        for i in range(sysm.rank):
            y = model.to_model(sysm.basis_element(n, i))
            hy = _mv(hf, y[:nf]) if nf else []
            dy, fg = project(list(hy))
            if any(v != 0 for v in dy) or any(v != 0 for v in fg):
                out["image_killed"] = False
    free_gens = [(k, y) for k, y, _ in coker.generators if y[:nf] != tuple(Fraction(0) for _ in range(nf))]
    for idx, (_, y) in enumerate(free_gens):
        dy, fg = project(list(y[:nf]))
        coords = [v for v in dy] + list(fg)
        target = [0] * len(coords)
        target[idx] = 1
        if [Fraction(c) for c in coords] != [Fraction(t) for t in target]:
            out["sections"] = False
    out["ok"] = out["image_killed"] and out["sections"]
    return out
