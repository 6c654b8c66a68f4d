"""Command-line front end: ``selfsim <subcommand> [flags]``."""

from __future__ import annotations

import argparse
import sys

from . import __version__
from .errors import GroupDefinitionError, IndexNonzero, NotFullBisection, SelfSimError, Undetermined
from .fullgroup import canonicalize, compose_all, factor, format_table, index, parse_table
from .group import DIHEDRAL, load_group, parse_tree_word, tree_str, word_str
from .homology import homology_colimit, stabilized_homology
from .ktheory import k0_colimit, pv_compute
from .report import (
    FAIL,
    UNDETERMINED,
    RunConfig,
    emit_report,
    report_status,
    summary_lines,
    verify_paper,
)


class UsageError(Exception):
    pass


def _parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--group", default=DIHEDRAL, help="built-in name or group-definition file")
    common.add_argument("--depth", type=int, default=8, help="depth bound k_max")
    common.add_argument("--degree", type=int, default=6, help="homological degree (bound)")
    common.add_argument("--max-word-len", type=int, default=16, help="word-length bound L")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--out", default=None, help="write the JSON report here")

    p = argparse.ArgumentParser(prog="selfsim", description=__doc__)
    p.add_argument("--version", action="version", version=f"selfsim {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    a = sub.add_parser("act", parents=[common], help="tree action and restriction of a group word")
    a.add_argument("word", help="group word, e.g. ab (use e or '' for the identity)")
    a.add_argument("tree", help="tree word, e.g. 01 (use - for the empty word)")

    sub.add_parser("pseudo-free", parents=[common], help="pseudo-freeness certificate up to --max-word-len")
    sub.add_parser("homology", parents=[common], help="H_p of the transformation groupoid, p = --degree")
    sub.add_parser("stabilized", parents=[common], help="stabilized homology, p = --degree in 0..2")
    sub.add_parser("ktheory", parents=[common], help="K0 colimit and the PV kernel/cokernel")

    f = sub.add_parser("fullgroup", parents=[common], help="bisection tables: index, factor, compose")
    f.add_argument("action", choices=["index", "factor", "compose"])
    f.add_argument("--table", action="append", default=[],
                   help="table text; entries separated by newlines or ';' (repeat for compose)")
    f.add_argument("--table-file", action="append", default=[], help="file holding one table")

    sub.add_parser("verify-paper", parents=[common], help="run every claim and write the full report")
    return p


def _config(ns) -> RunConfig:
    try:
        return RunConfig(ns.group, ns.depth, ns.degree, ns.max_word_len, ns.seed, ns.out)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _meta(cfg: RunConfig, command: str) -> dict:
    return {"tool": "selfsim", "version": __version__, "command": command, "config": cfg.echo()}


def _tables(group, ns) -> list:
    texts = [t.replace(";", "\n") for t in ns.table]
    for path in ns.table_file:
        with open(path, encoding="utf-8") as fh:
            texts.append(fh.read())
    if not texts:
        raise UsageError("fullgroup needs --table or --table-file")
    return [parse_table(group, t) for t in texts]


def run_command(argv=None, stdout=None) -> int:
    stdout = stdout or sys.stdout
    parser = _parser()
    ns = parser.parse_args(argv)
    try:
        cfg = _config(ns)
        group = load_group(cfg.group)
        report, lines = _dispatch(ns, cfg, group)
    except (UsageError, GroupDefinitionError, NotFullBisection, FileNotFoundError) as exc:
        print(f"selfsim: error: {exc}", file=sys.stderr)
        return 2
    if cfg.out:
        emit_report(report, cfg.out)
    for line in lines:
        print(line, file=stdout)
    return report_status(report)


def _dispatch(ns, cfg: RunConfig, group):
    cmd = ns.command
    if cmd == "verify-paper":
        report = verify_paper(cfg, group)
        lines = summary_lines(report)
        n_fail = sum(c["status"] == FAIL for c in report["claims"])
        n_und = sum(c["status"] == UNDETERMINED for c in report["claims"])
        lines.append(f"{len(report['claims'])} claims, {n_fail} failed, {n_und} undetermined")
        return report, lines
    report = {"meta": _meta(cfg, cmd)}
    if cmd == "act":
        try:
            g = group.reduce(group.parse_word("" if ns.word == "e" else ns.word))
            w = parse_tree_word(ns.tree)
            image, restr = group.act(g, w)
        except (SelfSimError, ValueError) as exc:
            raise UsageError(str(exc)) from None
        report["act"] = {"g": word_str(g), "w": tree_str(w), "image": tree_str(image), "restriction": word_str(restr)}
        return report, [f"{word_str(g)} . {tree_str(w)} = {tree_str(image)} | {word_str(restr)}"]
    if cmd == "pseudo-free":
        res = group.check_pseudo_free(cfg.max_word_len)
        ce = res.counterexample
        report["pseudo_free"] = {"certified": bool(res), "checked_triples": len(res.certificate),
                                 "counterexample": None if ce is None else {"g": word_str(ce[0]), "x": ce[1]}}
        if res:
            return report, [f"pseudo-free up to length {cfg.max_word_len} ({len(res.certificate)} triples)"]
        return report, [f"not pseudo-free: {word_str(ce[0])} fixes {ce[1]} with trivial restriction"]
    if cmd == "homology":
        p = cfg.degree
        try:
            dc = homology_colimit(group, p, cfg.depth)
            entry = {"degree": p, "group": dc.label, "certified": dc.certified, "stable_from": dc.stable_from}
        except Undetermined as exc:
            entry = {"degree": p, "group": UNDETERMINED, "certified": False, "note": str(exc)}
        report["homology"] = [entry]
        return report, [entry["group"]]
    if cmd == "stabilized":
        p = cfg.degree
        if p > 2:
            raise UsageError("stabilized homology is available in degrees 0, 1, 2")
        try:
            st = stabilized_homology(group, p)
            entry = {"degree": p, "group": st.label, "certified": True,
                     "connector": [[int(x) for x in row] for row in st.system.connector.matrix]}
        except Undetermined as exc:
            entry = {"degree": p, "group": UNDETERMINED, "certified": False, "note": str(exc)}
        report["stabilized"] = [entry]
        return report, [entry["group"]]
    if cmd == "ktheory":
        k0 = k0_colimit(group)
        pv = pv_compute(k0)
        cm = [[c.image[i] for c in k0.columns] for i in range(3)]
        report["ktheory"] = {"K0": pv.k0.label, "K1": pv.k1.label, "connecting_matrix": cm,
                             "colimit_model": k0.model.label,
                             "K1_generator": list(pv.k1_generator_coords)}
        return report, [f"colimit {k0.model.label}", f"K0 = {pv.k0.label}", f"K1 = {pv.k1.label}",
                        f"K1 generator {tuple(str(x) for x in pv.k1_generator_coords)}"]
    if cmd == "fullgroup":
        tables = _tables(group, ns)
        if ns.action == "index":
            vals = [index(canonicalize(group, t)) for t in tables]
            report["fullgroup"] = {"index": vals}
            return report, [str(v) for v in vals]
        if ns.action == "compose":
            out = compose_all(group, tables)
            report["fullgroup"] = {"compose": format_table(out).splitlines()}
            return report, [format_table(out)]
        try:
            fs = factor(group, tables[0])
        except IndexNonzero as exc:
            report["fullgroup"] = {"factor": None, "error": f"IndexNonzero: {exc}"}
            return report, [f"IndexNonzero: {exc}"]
        report["fullgroup"] = {"factor": [str(f) for f in fs]}
        return report, [str(f) for f in fs] or ["(identity)"]
    raise UsageError(f"unknown command {cmd}")


def main(argv=None) -> int:
    return run_command(argv)


if __name__ == "__main__":
    sys.exit(main())
