"""Verification runs and their canonical JSON reports.

Every value that leaves this module is an int, a string, a bool, a list or a
dict. Dyadic rationals are written as ``{"num": n, "log2den": k}``.
"""

from __future__ import annotations

import json
import random
from dataclasses import asdict, dataclass
from fractions import Fraction

import numpy as np

from . import __version__
from .abelian import (
    FGAbelianGroup,
    check_snf,
    cokernel_presentation,
    identity,
    int_matrix,
    induced_hom,
    matmul,
    snf,
    subquotient,
)
from .colimit import (
    StationarySystem,
    colim_equal,
    log2_denominator,
    model_matrix,
    verify_relation,
)
from .errors import IndexNonzero, SelfSimError, Undetermined
from .fullgroup import (
    ab_image,
    canonicalize,
    compose,
    compose_all,
    factor,
    hat,
    identity_table,
    index,
    inverse,
    random_table,
    table,
)
from .germs import cross_engine_check, fox_classes, germ_witness_check, symbol
from .group import DIHEDRAL, SelfSimilarGroup, dihedral_closed_forms, load_group, word_str
from .homology import (
    boundary,
    depth_module,
    fox_cycle,
    group_homology,
    homology_colimit,
    les_assemble,
    per_factor_vanishing,
    refinement_chain_map,
    refinement_induced,
    stabilized_homology,
    torsion_flags,
)
from .ktheory import (
    GroupRingElement,
    GroupRingMatrix,
    descriptor_rank,
    hk_report,
    k0_colimit,
    matrix_recursion,
    pv_compute,
)

PASS, FAIL, UNDETERMINED = "PASS", "FAIL", "UNDETERMINED"

# Operation names a full verification run must touch.
OPERATIONS = (
    "reduce", "act", "level_permutation", "orbits", "check_pseudo_free",
    "snf", "cokernel_presentation", "subquotient", "induced_hom",
    "colim_equal", "verify_relation", "colim_ker_coker",
    "depth_module", "group_homology", "refinement_induced", "homology_colimit", "fox_cycle",
    "stabilized_homology", "les_assemble", "germ_witness_check",
    "matrix_recursion", "k0_colimit", "pv_compute", "hk_report",
    "validate_and_canonicalize", "compose", "inverse", "index", "hat", "factor", "ab_image",
    "run_command", "emit_report",
)

CLAIM_IDS = tuple(f"AC{i}" for i in range(1, 11))


@dataclass
class RunConfig:
    group: str = DIHEDRAL
    depth: int = 8
    degree: int = 6
    max_word_len: int = 16
    seed: int = 0
    out: str | None = None

    def __post_init__(self):
        for name in ("depth", "max_word_len"):
            if getattr(self, name) < 1:
                raise ValueError(f"{name} must be positive")
        # degree 0 is a legitimate single degree for the homology commands
        if self.degree < 0:
            raise ValueError("degree must be nonnegative")
        if self.seed < 0:
            raise ValueError("seed must be nonnegative")

    def echo(self) -> dict:
        d = asdict(self)
        d.pop("out")
        return d


@dataclass
class Claim:
    id: str
    title: str
    computed: object
    expected: object
    status: str
    witness: str = ""

    def as_dict(self) -> dict:
        return asdict(self)


def status_of(ok: bool) -> str:
    return PASS if ok else FAIL


# -- serialization ---------------------------------------------------------------------


def dyadic(q) -> dict:
    q = Fraction(q)
    return {"num": q.numerator * (2 ** log2_denominator(q)) // q.denominator, "log2den": log2_denominator(q)}


def jsonable(x):
    if isinstance(x, bool) or x is None or isinstance(x, str):
        return x
    if isinstance(x, (int, np.integer)):
        return int(x)
    if isinstance(x, Fraction):
        return int(x) if x.denominator == 1 else dyadic(x)
    if isinstance(x, float):
        raise TypeError("floating-point values are not allowed in reports")
    if isinstance(x, dict):
        return {str(k): jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple, np.ndarray)):
        return [jsonable(v) for v in x]
    if isinstance(x, FGAbelianGroup):
        return str(x)
    raise TypeError(f"cannot serialize {type(x).__name__}")


def canonical_json(obj) -> str:
    return json.dumps(jsonable(obj), sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def emit_report(report: dict, path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(canonical_json(report))


def load_report(path) -> dict:
    with open(path, encoding="utf-8") as fh:
        return json.load(fh)


def report_status(report: dict) -> int:
    """Exit status: 0 unless some claim FAILed."""
    return 1 if any(c["status"] == FAIL for c in report.get("claims", [])) else 0


# -- sections --------------------------------------------------------------------------


class Run:
    """Accumulates sections, claims and the set of exercised operations."""

    def __init__(self, cfg: RunConfig, group: SelfSimilarGroup = None):
        self.cfg = cfg
        self.group = group or load_group(cfg.group)
        self.rng = random.Random(cfg.seed)
        self.ops: set = set()
        self.claims: dict = {}
        self.props: dict = {}
        self.sections: dict = {}

    def op(self, *names):
        self.ops.update(names)

    def claim(self, cid, title, computed, expected, ok, witness=""):
        status = ok if isinstance(ok, str) else status_of(ok)
        self.claims[cid] = Claim(cid, title, computed, expected, status, witness)

    def guarded(self, cid, title, expected, fn):
        """Run a section; engine refusals become UNDETERMINED claims."""
        try:
            fn()
        except Undetermined as exc:
            self.claim(cid, title, None, expected, UNDETERMINED, str(exc))
        except (SelfSimError, NotImplementedError, ValueError) as exc:
            self.claim(cid, title, None, expected, UNDETERMINED, f"{type(exc).__name__}: {exc}")

    @property
    def is_dihedral(self) -> bool:
        return self.group.name == DIHEDRAL


def core_section(run: Run) -> dict:
    G, L = run.group, run.cfg.max_word_len
    run.op("reduce", "act", "level_permutation", "orbits", "check_pseudo_free")
    out = {}
    if run.is_dihedral:
        image, restr = G.act("ab", (0,))
        out["act_ab_0"] = {"image": list(image), "restriction": word_str(restr)}
        out["reduce_aabab"] = word_str(G.reduce("aabab"))
        out["level_permutation_a_2"] = G.level_permutation("a", 2)
    out["orbits_2"] = [["".join(map(str, w)) for w in orb] for orb in G.orbits(2)]
    cert = G.check_pseudo_free(L)
    closed_ok = None
    if run.is_dihedral:
        closed_ok = all(G.step(g, x) == (y, r)
                       for n in range(L + 1) for g, x, y, r in dihedral_closed_forms(n))
    out["pseudo_free"] = {
        "max_word_len": L,
        "certified": bool(cert),
        "checked_triples": len(cert.certificate),
        "counterexample": None if cert.counterexample is None
        else {"g": word_str(cert.counterexample[0]), "x": cert.counterexample[1]},
        "closed_forms": closed_ok,
    }
    ok = bool(cert) and closed_ok is not False
    run.claim("AC1", "pseudo-freeness certificate and closed forms", bool(cert) and bool(closed_ok), True,
              ok if closed_ok is not None else UNDETERMINED,
              f"{len(cert.certificate)} verified (g, x) triples up to length {L}")
    # cocycle identity on random triples
    words = list(G.reduced_words(min(8, L)))
    bad = 0
    for _ in range(500):
        g, h = run.rng.choice(words), run.rng.choice(words)
        w = tuple(run.rng.randrange(G.degree) for _ in range(run.rng.randrange(7)))
        hw, hr = G.act(h, w)
        _, gr = G.act(g, hw)
        img, r = G.act(G.multiply(g, h), w)
        if r != G.reduce(gr + hr) or img != G.act(g, hw)[0]:
            bad += 1
    run.props["cocycle_identity"] = bad == 0
    return out


def abelian_props(run: Run) -> None:
    run.op("snf", "cokernel_presentation", "subquotient", "induced_hom")
    ok = True
    for _ in range(500):
        m, n = run.rng.randint(1, 8), run.rng.randint(1, 8)
        a = int_matrix([[run.rng.randint(-9, 9) for _ in range(n)] for _ in range(m)], shape=(m, n))
        if not check_snf(a, snf(a)):
            ok = False
    run.props["snf_contract"] = ok
    cok = cokernel_presentation(int_matrix([[2, 0], [0, 4]]))
    sq = subquotient(int_matrix([[0, 0]]), int_matrix([[2, 0], [0, 3]]))
    ident = induced_hom(identity(2), sq, sq)
    run.props["abelian_examples"] = (str(cok) == "Z/2 + Z/4" and str(sq.group) == "Z/6"
                                     and ident.is_identity())


def homology_section(run: Run) -> dict:
    G, K, P = run.group, run.cfg.depth, run.cfg.degree
    run.op("depth_module", "group_homology", "refinement_induced", "homology_colimit", "fox_cycle")
    out = {"colimits": [], "per_depth": {}}
    mods = [depth_module(G, k) for k in range(K + 1)]
    # boundary of boundary vanishes
    dd = True
    for m in mods:
        for p in range(1, P + 1):
            if np.any(matmul(boundary(m, p), boundary(m, p + 1)) != 0):
                dd = False
    run.props["boundary_squared_zero"] = dd
    # refinement equivariance
    eq = True
    for k in range(K):
        r = refinement_chain_map(mods[k], 0)
        for s in mods[k].generators:
            if not np.array_equal(matmul(r, mods[k].actions[s]), matmul(mods[k + 1].actions[s], r)):
                eq = False
    out["refinement_equivariant"] = eq
    vanishing = {k: per_factor_vanishing(m) for k, m in enumerate(mods)}
    out["per_factor_vanishing"] = {str(k): v for k, v in vanishing.items()}
    ok2 = all(all(v.values()) for v in vanishing.values())
    run.claim("AC2", "per-factor vanishing ker(I+A_s) = im(I-A_s)", ok2, True, ok2,
              f"depths 0..{K}, generators {', '.join(mods[0].generators)}")
    for k in range(min(K, 4) + 1):
        out["per_depth"][str(k)] = [str(group_homology(mods[k], p).group) for p in range(P + 1)]
    ref = refinement_induced(mods[0], mods[1], 0)
    out["refinement_H0_depth0"] = [[int(x) for x in row] for row in ref.matrix]
    fx = fox_cycle(mods[1], ("b",), mods[1].indicator((1,)))
    out["fox_b_on_Z1_depth1"] = [int(x) for x in fx]
    labels = {}
    for p in range(P + 1):
        entry = {"degree": p}
        try:
            dc = homology_colimit(G, p, K)
            entry.update(group=dc.label, certified=dc.certified, stable_from=dc.stable_from,
                         generators=_model_generators(dc.model, dc.stable_from))
        except Undetermined as exc:
            entry.update(group="UNDETERMINED", certified=False, note=str(exc), generators=[])
        labels[p] = entry["group"]
        out["colimits"].append(entry)
    want = {0: "Z[1/2]", 2: "0", 4: "0"}
    got = {p: labels.get(p) for p in want}
    decided = {p: v for p, v in got.items() if v not in (None, UNDETERMINED)}
    if any(decided[p] != want[p] for p in decided):
        status = FAIL
    else:
        # degrees past the configured bound cannot be confirmed
        status = PASS if len(decided) == len(want) else UNDETERMINED
    run.claim("AC3", "transformation-groupoid homology colimits", got, want, status,
              f"depth tower 0..{K}")
    return out


def _model_generators(model, depth: int) -> list:
    if model is None:
        return []
    out = []
    for kind, count in (("dyadic", model.dyadic_rank), ("free", model.free_rank), ("torsion", model.ntors)):
        for i in range(count):
            e = model.generator(kind, i)
            out.append({"kind": kind, "depth": depth, "level": e.level, "coordinates": list(e.rep)})
    return out


def stabilized_section(run: Run) -> dict:
    G = run.group
    run.op("stabilized_homology", "les_assemble", "colim_ker_coker")
    stabs = {p: stabilized_homology(G, p) for p in (0, 1, 2)}
    out = {"degrees": []}
    sigma_ok = {}
    for p, st in stabs.items():
        bf, bt = model_matrix(st.model, st.sigma)
        entry = {
            "degree": p,
            "group": st.label,
            "certified": True,
            "connector": [[int(x) for x in row] for row in st.system.connector.matrix],
            "sigma_dyadic_block": [[Fraction(x) for x in row] for row in bf],
            "sigma_torsion_block": [[int(x) for x in row] for row in bt],
            "generators": _model_generators(st.model, st.depth),
        }
        out["degrees"].append(entry)
        if p == 0:
            sigma_ok[p] = bf.shape == (1, 1) and Fraction(bf[0, 0]) == Fraction(1, 2)
        elif p == 1:
            sigma_ok[p] = bt.shape == (1, 1) and int(bt[0, 0]) % 2 == 1
    # the b-class generates H_1; the a-class dies after one connecting step
    st1 = stabs[1]
    mod = depth_module(G, st1.depth)
    ones = mod.indicator(())
    cls = {}
    for s in mod.generators:
        v = st1.level_homology.project(fox_cycle(mod, (s,), ones))
        e = st1.system.element(0, tuple(int(x) for x in v))
        cls[s] = {"level_class": [int(x) for x in v],
                  "zero_in_colimit": st1.system.is_zero(e),
                  "zero_after_one_step": st1.system.is_zero(st1.system.push(e, 1))}
    out["generator_classes_degree1"] = cls
    b_gen = "b" in cls and not cls["b"]["zero_in_colimit"] and st1.label == "Z/2"
    a_dies = "a" in cls and cls["a"]["zero_after_one_step"]
    computed = {"H0": stabs[0].label, "H1": stabs[1].label, "sigma0_halving": sigma_ok.get(0, False),
                "sigma1_identity": sigma_ok.get(1, False), "b_class_generates": b_gen, "a_class_dies": a_dies}
    expected = {"H0": "Z[1/2]", "H1": "Z/2", "sigma0_halving": True, "sigma1_identity": True,
             "b_class_generates": True, "a_class_dies": True}
    run.claim("AC4", "stabilized homology and shift action", computed, expected, computed == expected,
              "colimit certified at coefficient depth 1")
    les = les_assemble(stabs)
    flags = torsion_flags(G, range(3, run.cfg.degree + 1), run.cfg.depth)
    out["les"] = [{"degree": e.degree, "status": e.status, "group": e.label, "coker_part": e.coker_part,
                   "ker_part": e.ker_part, "rank": e.rank, "note": e.note} for e in les]
    out["torsion_flags"] = {str(p): v for p, v in flags.items()}
    got = {f"H{e.degree}": e.label for e in les}
    want = {"H0": "0", "H1": "Z/2", "H2": "Z/2"}
    tors_ok = all(flags.values())
    if got != want or not tors_ok:
        status = FAIL
    else:
        status = PASS if set(range(3, 7)) <= set(flags) else UNDETERMINED
    run.claim("AC5", "groupoid homology from the long exact sequence", {**got, "torsion_flags": tors_ok},
              {**want, "torsion_flags": True}, status,
              f"exponent-2 checks for degrees 3..{run.cfg.degree} at depths <= {run.cfg.depth}")
    run.les = les
    run.flags = flags
    return out


def ktheory_section(run: Run) -> dict:
    G = run.group
    run.op("matrix_recursion", "k0_colimit", "pv_compute", "colim_equal", "verify_relation")
    one = GroupRingElement.unit(G)
    phi_a = matrix_recursion(GroupRingMatrix.scalar(G, 0, GroupRingElement.unit(G, ("a",))))
    phi_b = matrix_recursion(GroupRingMatrix.scalar(G, 0, GroupRingElement.unit(G, ("b",))))
    k0 = k0_colimit(G)
    pv = pv_compute(k0)
    sysm = k0.system
    rel = verify_relation(sysm, [(1, sysm.basis_element(0, 0)), (-2, sysm.basis_element(1, 0))])
    eq = colim_equal(sysm, sysm.basis_element(0, 1), sysm.basis_element(1, 0))
    cm = [[c.image[i] for c in k0.columns] for i in range(3)]
    out = {
        "matrix_recursion": {"a": phi_a.as_rows(),
                             "b": phi_b.as_rows(),
                             "a_squared_is_identity": phi_a * phi_a == GroupRingMatrix.scalar(G, 1, one),
                             "b_squared_is_identity": phi_b * phi_b == GroupRingMatrix.scalar(G, 1, one)},
        "connecting_matrix": cm,
        "connecting_columns": [{"label": c.label, "image": list(c.image), "source": c.source, "reason": c.reason}
                               for c in k0.columns],
        "colimit_model": k0.model.label,
        "colimit_checks": _flatten_checks(k0.report),
        "level_relation_1_n": rel,
        "P_0_equals_1_1": eq,
        "K0": pv.k0.label,
        "K1": pv.k1.label,
        "K1_generator": {"computed": [Fraction(x) for x in pv.k1_generator_coords],
                         "reference": [Fraction(x) for x in pv.reference_generator],
                         "reference_in_kernel": pv.reference_in_kernel,
                         "note": "coordinates rescaled so [1_n] = (1/2^n, 0); the listed reference vector is "
                                 "not killed by 1 - S, the computed one is"},
        "shift_fixes_unit": pv.shift_fixes_unit,
        "one_minus_shift_images": {k: list(v) for k, v in pv.image_table.items()},
    }
    checks_ok = all(v is True for v in _flatten_checks(k0.report).values() if isinstance(v, bool))
    computed = {"connecting_matrix": cm, "model": k0.model.label, "K0": pv.k0.label, "K1": pv.k1.label,
                "model_checks": checks_ok}
    expected = {"connecting_matrix": [[2, 1, 0], [0, 0, 1], [0, 0, 1]], "model": "Z[1/2] + Z", "K0": "Z", "K1": "Z",
             "model_checks": True}
    run.claim("AC6", "K-theory connecting matrix, colimit model and PV sequence", computed, expected,
              computed == expected,
              "K1 generator " + str([str(Fraction(x)) for x in pv.k1_generator_coords])
              + " reported next to the listed (1/4, 1)")
    run.pv = pv
    return out


def _flatten_checks(d, prefix="") -> dict:
    out = {}
    for k, v in d.items():
        key = f"{prefix}{k}"
        if isinstance(v, dict):
            out.update(_flatten_checks(v, key + "."))
        elif isinstance(v, (bool, str, int)):
            out[key] = v
        else:
            out[key] = str(v)
    return out


def hk_section(run: Run) -> dict:
    run.op("hk_report")
    k_ranks = {0: descriptor_rank(run.pv.k0), 1: descriptor_rank(run.pv.k1)}
    h_ranks = {e.degree: e.rank for e in run.les if e.status == "RESOLVED"}
    rows = hk_report(k_ranks, h_ranks, run.flags, run.cfg.degree)
    out = {
        "rows": [{"i": r.i, "k_rank": r.k_rank, "h_rank": r.h_rank, "verdict": r.verdict,
                  "h_degrees": [list(d) for d in r.h_degrees]} for r in rows],
        "verdict": [r.verdict for r in rows],
    }
    computed = [(r.k_rank, r.h_rank, r.verdict) for r in rows]
    expected = [(1, 0, "MISMATCH"), (1, 0, "MISMATCH")]
    run.claim("AC7", "rational comparison of K-theory and homology", computed, expected, computed == expected)
    return out


def fullgroup_section(run: Run) -> dict:
    G = run.group
    run.op("validate_and_canonicalize", "compose", "inverse", "index", "hat", "factor", "ab_image")
    tb = table(G, [("", "b", "")])
    ident = identity_table()
    out = {"index_b": index(tb), "ab_image_b": ab_image(tb)}
    rng = random.Random(run.cfg.seed)
    roundtrip, lengths = 0, []
    for _ in range(200):
        t = random_table(G, rng, 4, 6, index_value=0)
        fs = factor(G, t)
        lengths.append(len(fs))
        if compose_all(G, [f.table(G) for f in fs]) == canonicalize(G, t):
            roundtrip += 1
    exact, sampled = True, 0
    for _ in range(100):
        t = random_table(G, rng, 4, 6)
        sampled += 1
        try:
            factor(G, t)
            raised = False
        except IndexNonzero:
            raised = True
        if raised != (index(t) == 1):
            exact = False
    # group-law sanity on random triples
    laws = True
    for _ in range(50):
        a, b, c = (random_table(G, rng, 3, 4) for _ in range(3))
        if compose(G, compose(G, a, b), c) != compose(G, a, compose(G, b, c)):
            laws = False
        if compose(G, inverse(G, a), a) != ident:
            laws = False
        if index(compose(G, a, b)) != (index(a) + index(b)) % 2:
            laws = False
    hv = hat(G, symbol(G, "1", "ba", "0"))
    laws = laws and compose(G, hv, hv) == ident and index(hv) == 0
    h0 = next((e.label for e in run.les if e.degree == 0), None) if hasattr(run, "les") else None
    h1 = next((e.label for e in run.les if e.degree == 1), None) if hasattr(run, "les") else None
    ab = h1 if (h0 == "0" and out["index_b"] == 1) else "UNDETERMINED"
    out.update({
        "factor_roundtrip": {"tables": 200, "ok": roundtrip, "max_length": max(lengths),
                             "total_length": sum(lengths)},
        "index_obstruction_exact": exact,
        "index_obstruction_sampled": sampled,
        "group_laws": laws,
        "abelianization": ab,
        "abelianization_basis": "H0 = 0 makes the index map the abelianization onto H1",
    })
    computed = {"index_b": out["index_b"], "roundtrip": roundtrip, "obstruction_exact": exact,
                "abelianization": ab}
    expected = {"index_b": 1, "roundtrip": 200, "obstruction_exact": True, "abelianization": "Z/2"}
    run.claim("AC8", "full group index, factorization and abelianization", computed, expected, computed == expected,
              f"seed {run.cfg.seed}")
    return out


def colimit_props(run: Run) -> None:
    sysm = StationarySystem.from_matrix(FGAbelianGroup(3), int_matrix([[2, 1, 0], [0, 0, 1], [0, 0, 1]]))
    ok = True
    for _ in range(60):
        l1, l2 = run.rng.randrange(4), run.rng.randrange(4)
        e1 = sysm.element(l1, tuple(run.rng.randint(-3, 3) for _ in range(3)))
        e2 = sysm.element(l2, tuple(run.rng.randint(-3, 3) for _ in range(3)))
        if sysm.colim_equal(e1, e2) != sysm.brute_equal(e1, e2, 40):
            ok = False
        if not sysm.colim_equal(e1, sysm.push(e1, l1 + 3)):
            ok = False
    run.props["colimit_equality_vs_brute_force"] = ok


def cross_section(run: Run) -> dict:
    G = run.group
    run.op("germ_witness_check")
    cross = cross_engine_check(G, max_depth=4, max_len=3)
    b = symbol(G, "", "b", "")
    e = symbol(G, "", "", "")
    two_b = germ_witness_check(G, [(2, b), (-1, e)], [(1, b, b)])
    unit = germ_witness_check(G, [(1, e)], [(1, e, e)])
    classes = {}
    for k in range(5):
        fc = fox_classes(G, k)
        sq = group_homology(depth_module(G, k), 1)
        classes[str(k)] = {s: list(v) for s, v in fc.items()}
        orders = {s: _class_order(sq.group, v) for s, v in fc.items()}
        classes[str(k) + "_orders"] = orders
    order_ok = all(o in (1, 2) for k, d in classes.items() if k.endswith("_orders") for o in d.values())
    out = {"pairs": cross["pairs"], "germ_relations": cross["germ_ok"], "depths": {str(k): v for k, v in
                                                                                    cross["depths"].items()},
           "two_b_is_boundary": two_b and unit, "fox_classes": classes}
    ok = cross["ok"] and two_b and unit and order_ok
    run.claim("AC10", "germ witnesses agree with the resolution", ok, True, ok,
              f"{cross['pairs']} product relations, depths 0..4")
    return out


def _class_order(group: FGAbelianGroup, v) -> int:
    v = group.canonical(np.array(v, dtype=object))
    if group.is_zero_element(v):
        return 1
    for m in range(2, 65):
        if group.is_zero_element(m * v):
            return m
    return 0


def verify_paper(cfg: RunConfig, group: SelfSimilarGroup = None) -> dict:
    run = Run(cfg, group)
    sections = {}
    sections["core"] = core_section(run)
    abelian_props(run)
    colimit_props(run)
    run.guarded("AC3", "transformation-groupoid homology colimits", None,
                lambda: sections.__setitem__("homology", homology_section(run)))
    run.guarded("AC5", "groupoid homology from the long exact sequence", None,
                lambda: sections.__setitem__("stabilized", stabilized_section(run)))
    run.guarded("AC6", "K-theory connecting matrix, colimit model and PV sequence", None,
                lambda: sections.__setitem__("ktheory", ktheory_section(run)))
    if hasattr(run, "pv") and hasattr(run, "les"):
        sections["hk"] = hk_section(run)
    else:
        run.claim("AC7", "rational comparison of K-theory and homology", None, None, UNDETERMINED,
                  "inputs not certified")
    run.guarded("AC8", "full group index, factorization and abelianization", None,
                lambda: sections.__setitem__("fullgroup", fullgroup_section(run)))
    run.guarded("AC10", "germ witnesses agree with the resolution", None,
                lambda: sections.__setitem__("cross_engine", cross_section(run)))
    props_ok = all(run.props.get(k) for k in ("boundary_squared_zero", "snf_contract",
                                              "colimit_equality_vs_brute_force", "cocycle_identity"))
    run.claim("AC9", "property suites", dict(run.props), True, props_ok)
    _apply_bounds(run)
    return assemble(run, sections)


# Smallest configuration at which each claim is stated.
CLAIM_BOUNDS = {
    "AC1": {"max_word_len": 16},
    "AC2": {"depth": 8},
    "AC3": {"degree": 4},
    "AC5": {"depth": 8, "degree": 6},
    "AC9": {"depth": 8, "degree": 6},
}


def _apply_bounds(run: Run) -> None:
    """A PASS below the stated bounds only covers part of the claim."""
    for cid, bounds in CLAIM_BOUNDS.items():
        c = run.claims.get(cid)
        short = [f"{k} {getattr(run.cfg, k)} < {v}" for k, v in bounds.items() if getattr(run.cfg, k) < v]
        if c is not None and c.status == PASS and short:
            c.status = UNDETERMINED
            c.witness = f"{c.witness}; below the stated bounds ({', '.join(short)})"


def assemble(run: Run, sections: dict) -> dict:
    claims = [run.claims[c].as_dict() for c in CLAIM_IDS if c in run.claims]
    for key in ("homology", "stabilized", "ktheory", "hk", "fullgroup"):
        sections.setdefault(key, {})
    return {
        "meta": {"tool": "selfsim", "version": __version__, "config": run.cfg.echo(),
                 "group": {"name": run.group.name, "degree": run.group.degree},
                 "operations": sorted(run.ops | {"run_command", "emit_report"})},
        "claims": claims,
        **sections,
    }


def summary_lines(report: dict) -> list:
    lines = [f"{c['id']:<5} {c['status']:<13} {c['title']}" for c in report.get("claims", [])]
    return lines
