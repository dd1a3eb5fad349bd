"""Command line interface.

Exit codes: 0 ok, 2 malformed input, 3 invalid relation/metric,
4 not realizable, 1 internal error.  Data goes to stdout (or --output),
diagnostics to stderr.
"""
from __future__ import annotations

import argparse
import sys
import warnings

from . import relations as rel
from . import ternary as ter
from .errors import (ClassInconsistency, Degree2Root, InPointerConflict, InputError,
                     MixedKindConflict, NoCentralVertex, NoSource, NotEquivalence, NotForest,
                     PhyloError, RealizationError, TwoComponents, ValidationError,
                     ZeroOneConflict)
from .oracles import enumerate_datings, enumerate_edge_labelings, enumerate_phylo_trees
from .quartets import displayed_quartets, format_quartets
from .tree import parse_tree, serialize_tree

WARNING_TEXT = {
    Degree2Root: "degree-2 root",
    TwoComponents: "two components, no binary tree",
    NoCentralVertex: "no central vertex",
}


class Exit(Exception):
    def __init__(self, code):
        self.code = code


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None


def report_validation(result) -> list[str]:
    """Format a validation outcome: ``OK`` or one line per violation, sorted."""
    if result is None:
        return ["OK"]
    if isinstance(result, ter.MetricReport):
        return result.lines()
    if isinstance(result, list):
        return sorted(result) or ["OK"]
    w = result.witness
    if isinstance(result, NotForest):
        return [f"CYCLE {','.join(w)}"]
    if isinstance(result, NotEquivalence):
        return [f"NOT-EQUIVALENCE {','.join(w)}"]
    if isinstance(result, ZeroOneConflict):
        return [f"ZERO-ONE {','.join(w)}"]
    if isinstance(result, ClassInconsistency):
        return [f"CLASS-INCONSISTENT {','.join(w[0])} {','.join(w[1])}"]
    if isinstance(result, InPointerConflict):
        return [f"IN-POINTER {w[0]},{w[1]} {w[2]}"]
    if isinstance(result, MixedKindConflict):
        return [f"MIXED-KIND {','.join(w[0][:2])} {','.join(w[1][:2])}"]
    if isinstance(result, NoSource):
        return [f"NO-SOURCE {','.join(map(str, w or ()))}"]
    return [f"INVALID {result}"]


class App:
    def __init__(self, out, err):
        self.out = out
        self.err = err

    def emit(self, text: str):
        self.out.write(text)

    def warn(self, caught):
        for w in caught:
            msg = WARNING_TEXT.get(w.category, str(w.message))
            self.err.write(f"warning: {msg}\n")

    # -- subcommands ---------------------------------------------------------

    def derive_relation(self, a):
        t = parse_tree(_read(a.tree))
        mode = rel.DIRECTED if a.mode == "dir" else rel.SYMMETRIC
        self.emit(rel.format_relation(rel.derive_relation(t, mode)))

    def derive_ternary(self, a):
        t = parse_tree(_read(a.tree))
        self.emit(ter.format_ternary(ter.derive_ternary(t)))

    def check_relation(self, a):
        r = rel.parse_relation(_read(a.input))
        try:
            rel.build_quotient(r)
        except ValidationError as exc:
            self.emit("\n".join(report_validation(exc)) + "\n")
            raise
        self.emit("OK\n")

    def check_ternary(self, a):
        d = ter.parse_ternary(_read(a.input))
        report = ter.check_metric(d)
        lines = report.lines() if not report.valid else []
        if a.require_binary and report.valid:
            res = ter.is_fully_resolved(d)
            lines += [f"UNRESOLVED {','.join(q)}" for q in res.unresolved]
        lines = sorted(lines) or ["OK"]
        self.emit("\n".join(lines) + "\n")
        if lines != ["OK"]:
            raise ValidationError(f"{len(lines)} violation(s)")

    def reconstruct_relation(self, a):
        r = rel.parse_relation(_read(a.input))
        if a.all_binary:
            trees = rel.enumerate_binary(r, allow_degree2_root=a.allow_degree2_root)
            if not trees:
                raise RealizationError("no binary tree explains the relation")
            self.emit("".join(serialize_tree(t) for t in trees))
            return
        if r.mode == rel.MIXED:
            found = rel.admissible_rooted_trees(r)
            if not found:
                raise RealizationError("no rooted tree realizes the mixed relation")
            self.emit(serialize_tree(found[0][1]))
            return
        self.emit(serialize_tree(rel.reconstruct(r, a.root)))

    def reconstruct_ternary(self, a):
        d = ter.parse_ternary(_read(a.input))
        self.emit(serialize_tree(ter.reconstruct(d)))

    def quartets(self, a):
        if a.tree:
            q = displayed_quartets(parse_tree(_read(a.tree)))
        else:
            q = ter.generate_quartets(ter.parse_ternary(_read(a.ternary)))
        self.emit(format_quartets(q))

    def roots(self, a):
        r = rel.parse_relation(_read(a.input))
        found = rel.admissible_rooted_trees(r)
        if not found:
            raise RealizationError("some component has no central vertex")
        for desc, t in found:
            centers = ",".join(desc.centers)
            self.emit(f"ROOT {desc.component} {desc.vertex} centers={centers}\n")
            self.emit(serialize_tree(t))

    def dev_enumerate(self, a):
        taxa = [x for x in a.taxa.split(",") if x]
        for topo in enumerate_phylo_trees(taxa):
            if a.kind == "trees":
                self.emit(serialize_tree(topo))
            elif a.kind == "labelings":
                for t in enumerate_edge_labelings(topo):
                    self.emit(serialize_tree(t))
            else:
                alphabet = [x for x in a.alphabet.split(",") if x]
                for t in enumerate_datings(topo, alphabet, a.discriminating):
                    self.emit(serialize_tree(t))


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="phylorel",
                                description="Rare-event relations and ternary metrics on phylogenetic trees.")
    p.add_argument("-o", "--output", help="write data here instead of stdout")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("derive-relation", help="Zero/single-1 relation of a labelled tree")
    s.add_argument("--tree", required=True)
    s.add_argument("--mode", choices=["sym", "dir"], default="sym")

    s = sub.add_parser("derive-ternary", help="ternary map of a dated tree")
    s.add_argument("--tree", required=True)

    s = sub.add_parser("check-relation", help="validate a relation")
    s.add_argument("--input", required=True)

    s = sub.add_parser("check-ternary", help="validate a ternary map")
    s.add_argument("--input", required=True)
    s.add_argument("--require-binary", action="store_true",
                   help="also require every constant 4-set to be resolved")

    s = sub.add_parser("reconstruct-relation", help="minimally resolved tree of a relation")
    s.add_argument("--input", required=True)
    s.add_argument("--all-binary", action="store_true", help="list every binary explaining tree")
    s.add_argument("--allow-degree2-root", action="store_true",
                   help="with --all-binary, accept a degree-2 hub for two components")
    s.add_argument("--root", help="directed input: source taxon of the root component, or z")

    s = sub.add_parser("reconstruct-ternary", help="dated tree of a ternary map")
    s.add_argument("--input", required=True)

    s = sub.add_parser("quartets", help="displayed or generated quartets")
    g = s.add_mutually_exclusive_group(required=True)
    g.add_argument("--tree")
    g.add_argument("--ternary")

    s = sub.add_parser("roots", help="admissible roots of a mixed relation")
    s.add_argument("--input", required=True)

    s = sub.add_parser("dev", help="developer tools")
    dsub = s.add_subparsers(dest="dev_command", required=True)
    e = dsub.add_parser("enumerate", help="enumerate trees, labelings or datings")
    e.add_argument("--taxa", required=True, help="comma separated taxa (at most 8)")
    e.add_argument("--kind", choices=["trees", "labelings", "datings"], default="trees")
    e.add_argument("--alphabet", default="A,B", help="comma separated colors for datings")
    e.add_argument("--discriminating", action="store_true")
    return p


def main(argv=None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    handler = args.command.replace("-", "_")
    if args.command == "dev":
        handler = "dev_" + args.dev_command
    out = stdout
    if args.output:
        out = open(args.output, "w", encoding="utf-8", newline="\n")
    app = App(out, stderr)
    code = 0
    try:
        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter("always")
            try:
                getattr(app, handler)(args)
            finally:
                app.warn(caught)
    except InputError as exc:
        stderr.write(f"error: {exc}\n")
        code = 2
    except ValidationError as exc:
        stderr.write(f"invalid: {exc}\n")
        code = 3
    except RealizationError as exc:
        stderr.write(f"not realizable: {exc}\n")
        code = 4
    except PhyloError as exc:
        stderr.write(f"error: {exc}\n")
        code = 1
    except Exception as exc:  # noqa: BLE001
        stderr.write(f"internal error: {type(exc).__name__}: {exc}\n")
        code = 1
    finally:
        if out is not stdout:
            out.close()
    return code


run = main


if __name__ == "__main__":
    sys.exit(main())
