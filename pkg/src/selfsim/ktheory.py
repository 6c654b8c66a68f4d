"""K-theory bookkeeping for the matrix-recursion limit of the dihedral group.

Group-ring matrices carry integer coefficients only; the analytic inputs
(which projections generate K0 of the group algebra and the equivalence of
the averaged swap projection with a matrix unit) enter as labelled axioms.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .abelian import FGAbelianGroup, identity, int_matrix
from .colimit import (
    ColimitModel,
    StationarySystem,
    certify_colimit,
    colim_ker_coker,
    level_map,
)
from .group import SelfSimilarGroup, Word, dihedral, word_str

# -- group ring ------------------------------------------------------------------


class GroupRingElement:
    """Finite integer combination of group elements, keyed by reduced words."""

    __slots__ = ("group", "coeffs")

    def __init__(self, group: SelfSimilarGroup, coeffs=None):
        self.group = group
        acc = {}
        for w, c in (coeffs or {}).items():
            w = group.reduce(group.parse_word(w))
            acc[w] = acc.get(w, 0) + int(c)
        self.coeffs = {w: c for w, c in sorted(acc.items()) if c}

    @classmethod
    def unit(cls, group, g: Word = ()) -> "GroupRingElement":
        return cls(group, {tuple(g): 1})

    def __add__(self, other):
        out = dict(self.coeffs)
        for w, c in other.coeffs.items():
            out[w] = out.get(w, 0) + c
        return GroupRingElement(self.group, out)

    def __neg__(self):
        return GroupRingElement(self.group, {w: -c for w, c in self.coeffs.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, int):
            return GroupRingElement(self.group, {w: c * other for w, c in self.coeffs.items()})
        out = {}
        for w1, c1 in self.coeffs.items():
            for w2, c2 in other.coeffs.items():
                w = self.group.multiply(w1, w2)
                out[w] = out.get(w, 0) + c1 * c2
        return GroupRingElement(self.group, out)

    __rmul__ = __mul__

    def star(self) -> "GroupRingElement":
        return GroupRingElement(self.group, {self.group.inverse(w): c for w, c in self.coeffs.items()})

    def __eq__(self, other):
        return isinstance(other, GroupRingElement) and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(tuple(self.coeffs.items()))

    def __bool__(self):
        return bool(self.coeffs)

    def __repr__(self):
        if not self.coeffs:
            return "0"
        return " + ".join(f"{c}*U[{word_str(w)}]" for w, c in self.coeffs.items())


@dataclass(eq=False)
class GroupRingMatrix:
    """Square matrix over the group ring indexed by depth-``level`` words."""

    group: SelfSimilarGroup
    level: int
    entries: dict = field(default_factory=dict)  # (row, col) -> GroupRingElement

    def __post_init__(self):
        self.entries = {k: v for k, v in self.entries.items() if v}

    @property
    def size(self) -> int:
        return self.group.degree ** self.level

    @classmethod
    def scalar(cls, group, level: int, x: GroupRingElement) -> "GroupRingMatrix":
        return cls(group, level, {(i, i): x for i in range(group.degree**level)})

    @classmethod
    def unit(cls, group, level: int, g: Word, v, w) -> "GroupRingMatrix":
        """``U_g`` tensor the matrix unit ``e_{v,w}``."""
        i, j = group.word_index(tuple(v)), group.word_index(tuple(w))
        return cls(group, level, {(i, j): GroupRingElement.unit(group, g)})

    def __getitem__(self, key) -> GroupRingElement:
        return self.entries.get(key, GroupRingElement(self.group))

    def __add__(self, other):
        out = dict(self.entries)
        for k, v in other.entries.items():
            out[k] = out[k] + v if k in out else v
        return GroupRingMatrix(self.group, self.level, out)

    def __mul__(self, other):
        out = {}
        by_row = {}
        for (k, j), v in other.entries.items():
            by_row.setdefault(k, []).append((j, v))
        for (i, k), u in self.entries.items():
            for j, v in by_row.get(k, []):
                prod = u * v
                out[(i, j)] = out[(i, j)] + prod if (i, j) in out else prod
        return GroupRingMatrix(self.group, self.level, out)

    def star(self):
        return GroupRingMatrix(self.group, self.level, {(j, i): v.star() for (i, j), v in self.entries.items()})

    def __eq__(self, other):
        return isinstance(other, GroupRingMatrix) and self.level == other.level and self.entries == other.entries

    def is_diagonal(self) -> bool:
        return all(i == j for i, j in self.entries)

    def as_rows(self) -> list:
        return [[repr(self[(i, j)]) for j in range(self.size)] for i in range(self.size)]


def matrix_recursion(m: GroupRingMatrix) -> GroupRingMatrix:
    """``U_g (x) e_{v,w} -> sum_x U_{g|x} (x) e_{v(g.x), wx}``."""
    group = m.group
    d = group.degree
    out = {}
    for (i, j), elem in m.entries.items():
        for g, c in elem.coeffs.items():
            for x in range(d):
                y, r = group.step(g, x)
                key = (i * d + y, j * d + x)
                term = GroupRingElement(group, {r: c})
                out[key] = out[key] + term if key in out else term
    return GroupRingMatrix(group, m.level + 1, out)


# -- K0 of the limit ------------------------------------------------------------------

BASIS = ("1", "P", "Q")


@dataclass
class ConnectingColumn:
    label: str
    image: tuple
    source: str  # "computed" or "axiom"
    reason: str


def _projection_class(g_entry: GroupRingElement) -> tuple:
    """K0 class of ``(1 + U_g)/2`` for a single group element in the basis (1, P, Q)."""
    (w,) = g_entry.coeffs
    return {(): (1, 0, 0), ("a",): (0, 1, 0), ("b",): (0, 0, 1)}[w]


def connecting_columns(group: SelfSimilarGroup = None) -> list:
    """Images of ``[1], [P], [Q]`` under one step of the matrix recursion."""
    group = group or dihedral()
    phi_one = matrix_recursion(GroupRingMatrix.scalar(group, 0, GroupRingElement.unit(group)))
    if phi_one != GroupRingMatrix.scalar(group, 1, GroupRingElement.unit(group)):
        raise NotImplementedError("matrix recursion is not unital")
    one = (phi_one.size, 0, 0)
    cols = [ConnectingColumn("1", one, "computed", "recursion is unital, image is the 2x2 identity")]
    phi_a = matrix_recursion(GroupRingMatrix.scalar(group, 0, GroupRingElement.unit(group, ("a",))))
    if phi_a.is_diagonal():
        raise NotImplementedError("diagonal image of U_a is not expected for this group")
    cols.append(ConnectingColumn(
        "P", (1, 0, 0), "axiom",
        "image of (1+U_a)/2 is the averaged swap projection, equivalent to a matrix unit"))
    phi_b = matrix_recursion(GroupRingMatrix.scalar(group, 0, GroupRingElement.unit(group, ("b",))))
    if not phi_b.is_diagonal():
        raise NotImplementedError("off-diagonal image of U_b")
    img = [0, 0, 0]
    for i in range(phi_b.size):
        for k, c in enumerate(_projection_class(phi_b[(i, i)])):
            img[k] += c
    cols.append(ConnectingColumn("Q", tuple(img), "computed", "image of U_b is diagonal; classes read off the diagonal"))
    return cols


def connecting_matrix(group: SelfSimilarGroup = None) -> np.ndarray:
    cols = connecting_columns(group)
    return int_matrix([list(c.image) for c in cols], shape=(3, 3)).T


def k0_system(group: SelfSimilarGroup = None) -> StationarySystem:
    return StationarySystem.from_matrix(FGAbelianGroup(3), connecting_matrix(group), name="K0")


def normalized_coordinates(model: ColimitModel, e) -> tuple:
    """Model coordinates rescaled so that ``[1_n]`` sits at ``(1/2^n, 0)``."""
    y = model.to_model(e)
    scale = _dyadic_scale(model)
    return (y[0] * scale,) + tuple(y[1:])


def _dyadic_scale(model: ColimitModel) -> Fraction:
    one0 = model.to_model(model.system.basis_element(0, 0))
    return Fraction(1) / one0[0]


def coordinate_families(n: int) -> dict:
    """Closed-form images of the three generator families at level ``n``."""
    return {
        "1": (Fraction(1, 2**n), Fraction(0)),
        "P": (Fraction(1, 2 ** (n + 1)), Fraction(0)),
        "Q": (-sum((Fraction(1, 2 ** (k + 1)) for k in range(1, n + 1)), Fraction(0)), Fraction(1)),
    }


@dataclass
class K0Result:
    system: StationarySystem
    model: ColimitModel
    columns: list
    report: dict


def k0_colimit(group: SelfSimilarGroup = None, max_level: int = 12) -> K0Result:
    system = k0_system(group)
    model = certify_colimit(system)
    e = system.basis_element
    rel = {
        "[1_n] = 2[1_{n+1}]": all(system.verify_relation([(1, e(n, 0)), (-2, e(n + 1, 0))]) for n in range(max_level)),
        "[P_n] = [1_{n+1}]": all(system.verify_relation([(1, e(n, 1)), (-1, e(n + 1, 0))]) for n in range(max_level)),
        "[Q_n] = [Q_{n+1}] + [P_{n+1}]": all(
            system.verify_relation([(1, e(n, 2)), (-1, e(n + 1, 2)), (-1, e(n + 1, 1))]) for n in range(max_level)),
    }
    scale = _dyadic_scale(model)
    families_ok = True
    for n in range(max_level + 1):
        fam = coordinate_families(n)
        for i, lab in enumerate(BASIS):
            if normalized_coordinates(model, e(n, i)) != fam[lab]:
                families_ok = False
    telescoping = all(
        coordinate_families(n)["Q"][0] == coordinate_families(n + 1)["Q"][0] + Fraction(1, 2 ** (n + 2))
        for n in range(max_level))
    # rescaling the dyadic coordinate by a unit is an automorphism of Z[1/2] + Z
    automorphism = log2_power(scale)
    report = {
        "model": model.label,
        "relations": rel,
        "psi_families": families_ok,
        "psi_telescoping": telescoping,
        "psi_rescaling": str(scale),
        "psi_rescaling_is_automorphism": automorphism,
        "model_verification": model.verify(max_level),
        "push_two_levels": all(system.verify_relation([(1, system.push(e(n, 0), n + 2)), (-4, e(n + 2, 0))])
                               for n in range(max_level)),
    }
    return K0Result(system, model, connecting_columns(group), report)


def log2_power(q: Fraction) -> bool:
    """Whether ``q`` is plus or minus a power of two (a unit of Z[1/2])."""
    q = abs(Fraction(q))
    for part in (q.numerator, q.denominator):
        if part & (part - 1):
            return False
    return True


@dataclass
class PVResult:
    k0: object  # ColimitDescriptor of the cokernel
    k1: object  # ColimitDescriptor of the kernel
    k1_generator_coords: tuple
    k1_generator_element: tuple
    reference_generator: tuple
    reference_in_kernel: bool
    shift_fixes_unit: bool
    image_table: dict


def shift_map(system: StationarySystem):
    """``S[1_n] = [1_{n+1}]`` and ``S[Q_n] = [Q_{n+1}]``: the level shift by one."""
    return level_map(system, [(1, 1, identity(system.rank))])


def pv_compute(k0: K0Result = None, max_level: int = 12) -> PVResult:
    k0 = k0 or k0_colimit()
    system, model = k0.system, k0.model
    n = system.rank
    h = level_map(system, [(1, 0, identity(n)), (-1, 1, identity(n))])
    kernel, coker = colim_ker_coker(h, system, model, max_level)
    scale = _dyadic_scale(model)
    gen = kernel.generators[0] if kernel.generators else None
    gen_coords = (gen[1][0] * scale,) + tuple(gen[1][1:]) if gen else ()
    claim = (Fraction(1, 4), Fraction(1))
    claim_model = (claim[0] / scale, claim[1])
    claim_elem = model.from_model(claim_model)
    claim_in_kernel = system.is_zero(h.apply(system, claim_elem))
    s = shift_map(system)
    fixes = system.colim_equal(s.apply(system, system.basis_element(0, 0)), system.basis_element(0, 0))
    table = {}
    for lab, i in (("1_n", 0), ("Q_n", 2)):
        y = normalized_coordinates(model, h.apply(system, system.basis_element(0, i)))
        table[f"(1-S)[{lab}] at n=0"] = tuple(str(v) for v in y)
    return PVResult(coker, kernel, gen_coords, gen[2] if gen else None, claim, claim_in_kernel, fixes, table)


# -- rational comparison --------------------------------------------------------------


@dataclass
class HKRow:
    i: int
    k_rank: int
    h_rank: int
    verdict: str
    h_degrees: list


def hk_report(k_ranks: dict, homology_ranks: dict, torsion_degrees: dict, max_degree: int = 6) -> list:
    """Compare ``rank K_i`` with ``sum_k rank H_{i+2k}`` for ``i = 0, 1``.

    ``homology_ranks`` holds certified rational ranks; degrees only known to be
    torsion via ``torsion_degrees`` count as rank zero. Unknown degrees make
    the row UNDETERMINED.
    """
    rows = []
    for i in (0, 1):
        total, degrees, unknown = 0, [], False
        for p in range(i, max_degree + 1, 2):
            if p in homology_ranks:
                total += homology_ranks[p]
                degrees.append((p, homology_ranks[p], "computed"))
            elif torsion_degrees.get(p):
                degrees.append((p, 0, "torsion flag"))
            else:
                unknown = True
                degrees.append((p, None, "unknown"))
        if unknown:
            verdict = "UNDETERMINED"
        else:
            verdict = "MATCH" if total == k_ranks[i] else "MISMATCH"
        rows.append(HKRow(i, k_ranks[i], total, verdict, degrees))
    return rows


def descriptor_rank(label_obj) -> int:
    """Rational rank of a catalog group (``Z[1/2]`` counts as rank one)."""
    return label_obj.dyadic_rank + label_obj.free_rank
