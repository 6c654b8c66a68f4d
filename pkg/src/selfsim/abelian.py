"""Integer matrices, Smith normal form and finitely generated abelian groups.

Matrices are numpy arrays of ``dtype=object`` holding Python ints, so every
entry is arbitrary precision. ``matmul`` switches to int64 only when an a
priori bound proves the product cannot overflow.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import gcd

import numpy as np

from .errors import NotAComplex, NotChainCompatible

_SAFE = 1 << 62


def int_matrix(data, shape=None) -> np.ndarray:
    if isinstance(data, np.ndarray) and data.dtype == object and shape is None:
        return data
    arr = np.array(data, dtype=object)
    if shape is not None:
        arr = arr.reshape(shape)
    if arr.ndim == 1 and shape is None:
        arr = arr.reshape(1, -1) if arr.size else arr.reshape(0, 0)
    out = np.empty(arr.shape, dtype=object)
    for idx, v in np.ndenumerate(arr):
        out[idx] = int(v)
    return out


def zeros(m: int, n: int) -> np.ndarray:
    out = np.empty((m, n), dtype=object)
    out.fill(0)
    return out


def identity(n: int) -> np.ndarray:
    out = zeros(n, n)
    for i in range(n):
        out[i, i] = 1
    return out


def vector(values) -> np.ndarray:
    out = np.empty(len(values), dtype=object)
    for i, v in enumerate(values):
        out[i] = int(v)
    return out


def max_abs(a: np.ndarray) -> int:
    if a.size == 0:
        return 0
    return int(max(abs(int(np.max(a))), abs(int(np.min(a)))))


def matmul(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Exact integer product."""
    inner = a.shape[-1]
    if inner == 0:
        shape = a.shape[:-1] + b.shape[1:]
        out = np.empty(shape, dtype=object)
        out.fill(0)
        return out
    if max_abs(a) * max_abs(b) * inner < _SAFE:
        prod = a.astype(np.int64) @ b.astype(np.int64)
        return prod.astype(object) if prod.ndim else int(prod)
    return np.dot(a, b)


def is_zero(a: np.ndarray) -> bool:
    return a.size == 0 or not np.any(a != 0)


def det(a: np.ndarray) -> int:
    """Determinant by fraction-free (Bareiss) elimination."""
    n = a.shape[0]
    if n == 0:
        return 1
    m = [[int(v) for v in row] for row in a]
    sign, prev = 1, 1
    for k in range(n - 1):
        if m[k][k] == 0:
            for i in range(k + 1, n):
                if m[i][k] != 0:
                    m[k], m[i] = m[i], m[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
        prev = m[k][k]
    return sign * m[n - 1][n - 1]


# -- Smith normal form ---------------------------------------------------------


@dataclass(frozen=True)
class SNFResult:
    """``U @ A @ V == D`` with ``U``, ``V`` unimodular; inverses are kept too."""

    U: np.ndarray
    D: np.ndarray
    V: np.ndarray
    U_inv: np.ndarray
    V_inv: np.ndarray

    @property
    def diagonal(self) -> list:
        return [int(self.D[i, i]) for i in range(min(self.D.shape))]

    @property
    def rank(self) -> int:
        return sum(1 for d in self.diagonal if d != 0)


def _least_pivot(m: np.ndarray, t: int):
    sub = m[t:, t:]
    if sub.size == 0:
        return None
    ones = np.flatnonzero((sub == 1) | (sub == -1))
    if ones.size:
        i, j = divmod(int(ones[0]), sub.shape[1])
        return t + i, t + j
    nz = np.flatnonzero(sub != 0)
    if nz.size == 0:
        return None
    flat = sub.ravel()
    best = min(nz, key=lambda k: (abs(flat[k]), k))
    i, j = divmod(int(best), sub.shape[1])
    return t + i, t + j


def snf(a) -> SNFResult:
    """Smith normal form with least-absolute-value pivoting.

    Ties between pivots are broken by the lowest (row, col) position.
    """
    m = int_matrix(a).copy()
    rows, cols = m.shape
    U, Ui, V, Vi = identity(rows), identity(rows), identity(cols), identity(cols)
    t = 0
    while t < min(rows, cols):
        piv = _least_pivot(m, t)
        if piv is None:
            break
        i, j = piv
        if i != t:
            m[[t, i], :] = m[[i, t], :]
            U[[t, i], :] = U[[i, t], :]
            Ui[:, [t, i]] = Ui[:, [i, t]]
        if j != t:
            m[:, [t, j]] = m[:, [j, t]]
            V[:, [t, j]] = V[:, [j, t]]
            Vi[[t, j], :] = Vi[[j, t], :]
        p = m[t, t]
        # clear column t below the pivot
        q = m[t + 1:, t] // p
        nz = np.flatnonzero(q != 0)
        if nz.size:
            r = nz + t + 1
            qq = q[nz]
            m[r, t:] -= np.multiply.outer(qq, m[t, t:])
            U[r, :] -= np.multiply.outer(qq, U[t, :])
            Ui[:, t] += np.dot(Ui[:, r], qq)
        # clear row t right of the pivot
        q = m[t, t + 1:] // p
        nz = np.flatnonzero(q != 0)
        if nz.size:
            c = nz + t + 1
            qq = q[nz]
            m[t:, c] -= np.multiply.outer(m[t:, t], qq)
            V[:, c] -= np.multiply.outer(V[:, t], qq)
            Vi[t, :] += np.dot(qq, Vi[c, :])
        if np.any(m[t + 1:, t] != 0) or np.any(m[t, t + 1:] != 0):
            continue
        if abs(p) != 1:
            rest = m[t + 1:, t + 1:]
            bad = np.flatnonzero(rest % p != 0) if rest.size else np.array([], dtype=int)
            if bad.size:
                r = t + 1 + int(bad[0]) // rest.shape[1]
                m[t, :] += m[r, :]
                U[t, :] += U[r, :]
                Ui[:, r] -= Ui[:, t]
                continue
        if p < 0:
            m[t, :] = -m[t, :]
            U[t, :] = -U[t, :]
            Ui[:, t] = -Ui[:, t]
        t += 1
    return SNFResult(U, m, V, Ui, Vi)


def check_snf(a, res: SNFResult) -> bool:
    """Independent check of the SNF contract for ``a``."""
    a = int_matrix(a)
    m, n = a.shape
    if not np.array_equal(matmul(matmul(res.U, a), res.V), res.D):
        return False
    if not (np.array_equal(matmul(res.U, res.U_inv), identity(m))
            and np.array_equal(matmul(res.V, res.V_inv), identity(n))):
        return False
    off = res.D.copy()
    for i in range(min(m, n)):
        off[i, i] = 0
    if not is_zero(off):
        return False
    d = res.diagonal
    if any(x < 0 for x in d):
        return False
    nz = [x for x in d if x]
    if d[: len(nz)] != nz:
        return False
    return all(nz[i + 1] % nz[i] == 0 for i in range(len(nz) - 1))


def kernel_basis(a: np.ndarray) -> np.ndarray:
    """Columns form a basis of the (saturated) integer kernel of ``a``."""
    res = snf(a)
    return res.V[:, res.rank:]


def image_basis(a: np.ndarray) -> np.ndarray:
    """Columns form a basis of the column span of ``a``."""
    res = snf(a)
    r = res.rank
    # A V = U^-1 D, so the first r columns of U^-1 D span the image
    return matmul(res.U_inv[:, :r], res.D[:r, :r]) if r else zeros(a.shape[0], 0)


def solve(a: np.ndarray, b: np.ndarray):
    """An integer solution ``x`` of ``a @ x == b`` (vector ``b``), or None."""
    res = snf(a)
    y = matmul(res.U, b.reshape(-1, 1)).ravel()
    diag = res.diagonal
    x = zeros(a.shape[1], 1).ravel()
    for i, v in enumerate(y):
        d = diag[i] if i < len(diag) else 0
        if d == 0:
            if v != 0:
                return None
        elif v % d:
            return None
        else:
            x[i] = v // d
    return matmul(res.V, x.reshape(-1, 1)).ravel()


def in_span(a: np.ndarray, b: np.ndarray) -> bool:
    return solve(a, b) is not None


# -- abelian groups ------------------------------------------------------------


@dataclass(frozen=True)
class FGAbelianGroup:
    """``Z/d1 + ... + Z/dk + Z^free_rank`` with ``d1 | d2 | ...``, all ``di >= 2``.

    Coordinates list the torsion generators first, then the free ones.
    """

    free_rank: int
    torsion: tuple = ()

    def __post_init__(self):
        for d, e in zip(self.torsion, self.torsion[1:]):
            if e % d:
                raise ValueError("invariant factors must form a divisibility chain")
        if any(d < 2 for d in self.torsion):
            raise ValueError("invariant factors must be at least 2")

    @property
    def ngens(self) -> int:
        return len(self.torsion) + self.free_rank

    @property
    def orders(self) -> tuple:
        """Order of each generator, 0 meaning infinite."""
        return tuple(self.torsion) + (0,) * self.free_rank

    @property
    def is_trivial(self) -> bool:
        return self.ngens == 0

    @property
    def is_finite(self) -> bool:
        return self.free_rank == 0

    @property
    def exponent(self) -> int:
        return self.torsion[-1] if self.torsion else 1

    def canonical(self, v) -> np.ndarray:
        out = vector(v)
        for i, d in enumerate(self.torsion):
            out[i] %= d
        return out

    def is_zero_element(self, v) -> bool:
        return not np.any(self.canonical(v) != 0)

    def relation_matrix(self) -> np.ndarray:
        out = zeros(self.ngens, len(self.torsion))
        for i, d in enumerate(self.torsion):
            out[i, i] = d
        return out

    def __str__(self):
        return group_label(self.free_rank, self.torsion)


def group_label(free_rank: int, torsion=(), dyadic_rank: int = 0) -> str:
    parts = ["Z[1/2]"] * dyadic_rank
    parts += ["Z"] * free_rank
    parts += [f"Z/{d}" for d in torsion]
    return " + ".join(parts) if parts else "0"


@dataclass(frozen=True)
class AbHom:
    source: FGAbelianGroup
    target: FGAbelianGroup
    matrix: np.ndarray

    def __post_init__(self):
        m = self.matrix
        if m.shape != (self.target.ngens, self.source.ngens):
            raise ValueError("matrix shape does not match the groups")
        for j, d in enumerate(self.source.torsion):
            if not self.target.is_zero_element(d * m[:, j]):
                raise ValueError(f"generator {j} of order {d} is not sent to an element of dividing order")

    def __call__(self, v) -> np.ndarray:
        return self.target.canonical(matmul(self.matrix, vector(v).reshape(-1, 1)).ravel())

    def compose(self, other: "AbHom") -> "AbHom":
        """``self o other``."""
        m = matmul(self.matrix, other.matrix)
        return AbHom(other.source, self.target, _canon_cols(self.target, m))

    def is_zero(self) -> bool:
        return all(self.target.is_zero_element(self.matrix[:, j]) for j in range(self.source.ngens))

    def is_identity(self) -> bool:
        if self.source != self.target:
            return False
        diff = self.matrix - identity(self.source.ngens)
        return all(self.target.is_zero_element(diff[:, j]) for j in range(self.source.ngens))

    def scalar(self):
        """The multiplier of a map between cyclic groups."""
        if self.matrix.shape != (1, 1):
            raise ValueError("not a map between cyclic groups")
        return int(self.matrix[0, 0])


def _canon_cols(group: FGAbelianGroup, m: np.ndarray) -> np.ndarray:
    out = m.copy()
    for i, d in enumerate(group.torsion):
        out[i, :] %= d
    return out


def cokernel_presentation(a) -> FGAbelianGroup:
    """``Z^rows / column span(a)`` in invariant-factor form."""
    return subquotient(zeros(0, np.shape(a)[0]), a).group


@dataclass(frozen=True)
class Subquotient:
    """``ker(ker_of) / im(mod_im_of)`` with lifting and projection data.

    ``lift[:, i]`` is an ambient cycle representing normal-form generator
    ``i``; ``proj @ v`` gives normal-form coordinates of an ambient cycle
    ``v`` (reduce with ``group.canonical``).
    """

    group: FGAbelianGroup
    ker_of: np.ndarray
    mod_im_of: np.ndarray
    lift: np.ndarray
    proj: np.ndarray
    cycles: np.ndarray = field(repr=False)

    @property
    def ambient_rank(self) -> int:
        return self.lift.shape[0]

    def project(self, v) -> np.ndarray:
        v = vector(v)
        return self.group.canonical(matmul(self.proj, v.reshape(-1, 1)).ravel())

    def is_cycle(self, v) -> bool:
        return is_zero(matmul(self.ker_of, vector(v).reshape(-1, 1)))

    def is_boundary(self, v) -> bool:
        return self.is_cycle(v) and self.group.is_zero_element(matmul(self.proj, vector(v).reshape(-1, 1)).ravel())


def subquotient(ker_of, mod_im_of) -> Subquotient:
    ker_of = int_matrix(ker_of)
    mod_im_of = int_matrix(mod_im_of)
    n = mod_im_of.shape[0]
    if ker_of.shape[1] != n:
        raise ValueError("matrices act on different ambient modules")
    if ker_of.shape[0]:
        k = snf(ker_of)
        r = k.rank
        cycles, cyc_inv = k.V[:, r:], k.V_inv
    else:
        r = 0
        cycles, cyc_inv = identity(n), identity(n)
    coords = matmul(cyc_inv, mod_im_of)
    if not is_zero(coords[:r, :]):
        bad = int(np.flatnonzero(np.any(coords[:r, :] != 0, axis=0))[0])
        raise NotAComplex(f"column {bad} of the image is not a cycle")
    c = coords[r:, :]
    m = c.shape[0]
    if c.shape[1]:
        s = snf(c)
        diag = s.diagonal + [0] * (m - len(s.diagonal))
        left, left_inv = s.U, s.U_inv
    else:
        diag = [0] * m
        left, left_inv = identity(m), identity(m)
    keep = [i for i, d in enumerate(diag) if d != 1]
    torsion = tuple(diag[i] for i in keep if diag[i] != 0)
    free = sum(1 for i in keep if diag[i] == 0)
    keep.sort(key=lambda i: (diag[i] == 0, i))
    group = FGAbelianGroup(free, torsion)
    lift = matmul(cycles, left_inv[:, keep]) if keep else zeros(n, 0)
    proj = matmul(left[keep, :], cyc_inv[r:, :]) if keep else zeros(0, n)
    return Subquotient(group, ker_of, mod_im_of, lift, proj, cycles)


def induced_hom(chain_map, source: Subquotient, target: Subquotient) -> AbHom:
    """Map on subquotients induced by an ambient integer matrix."""
    f = int_matrix(chain_map)
    image_of_cycles = matmul(f, source.cycles)
    if target.ker_of.shape[0]:
        test = matmul(target.ker_of, image_of_cycles)
        if not is_zero(test):
            j = int(np.flatnonzero(np.any(test != 0, axis=0))[0])
            raise NotChainCompatible("a cycle is not sent to a cycle", witness=source.cycles[:, j])
    image_of_bounds = matmul(f, source.mod_im_of)
    if image_of_bounds.size:
        coords = matmul(target.proj, image_of_bounds)
        for j in range(coords.shape[1]):
            if not target.group.is_zero_element(coords[:, j]):
                raise NotChainCompatible("a boundary is not sent to a boundary", witness=source.mod_im_of[:, j])
    mat = matmul(target.proj, matmul(f, source.lift))
    return AbHom(source.group, target.group, _canon_cols(target.group, mat))


def hom_kernel_cokernel(h: np.ndarray, source: FGAbelianGroup, target: FGAbelianGroup):
    """Kernel and cokernel of a map between normal-form groups.

    Returns ``(kernel, kernel_gens, cokernel, cokernel_gens)``; generator
    matrices are in source / target coordinates respectively.
    """
    h = int_matrix(h)
    rs, rt = source.relation_matrix(), target.relation_matrix()
    block = np.concatenate([h, rt], axis=1) if rt.shape[1] else h
    kb = kernel_basis(block)[: source.ngens, :]
    lat = kb
    # lattice of x with h x in target relations; relations of the source lie inside
    if rs.shape[1]:
        lat = np.concatenate([kb, rs], axis=1)
    lat = image_basis(lat)
    rel_coords = []
    for j in range(rs.shape[1]):
        rel_coords.append(solve(lat, rs[:, j]))
    rel = np.stack(rel_coords, axis=1) if rel_coords else zeros(lat.shape[1], 0)
    ker_sq = subquotient(zeros(0, lat.shape[1]), rel)
    ker_gens = matmul(lat, ker_sq.lift)
    im = np.concatenate([h, rt], axis=1) if rt.shape[1] else h
    cok_sq = subquotient(zeros(0, target.ngens), im)
    return ker_sq.group, ker_gens, cok_sq.group, cok_sq.lift


def order_of(group: FGAbelianGroup) -> int:
    """Order of a finite group."""
    if group.free_rank:
        raise ValueError("infinite group")
    out = 1
    for d in group.torsion:
        out *= d
    return out


def random_unimodular(n: int, rng, steps: int = None) -> np.ndarray:
    """A product of random elementary matrices."""
    m = identity(n)
    for _ in range(steps if steps is not None else 3 * n):
        i, j = rng.sample(range(n), 2) if n > 1 else (0, 0)
        if i == j:
            m[i, :] = -m[i, :]
            continue
        c = rng.choice([-2, -1, 1, 2])
        m[i, :] += c * m[j, :]
    return m


def gcd_list(values) -> int:
    g = 0
    for v in values:
        g = gcd(g, int(v))
    return g
