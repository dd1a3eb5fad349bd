"""Quartet systems: the quartets a tree displays, the thin / transitive /
saturated / complete predicates, and rebuilding a tree from its quartets.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass

from .errors import AmbiguousPlacement, Inconsistent, InputError, NoPlacement
from .tree import TAXON_RE, Tree, all_medians, canonical_form


def quartet(a, b, c, d):
    """Canonical ab|cd: each pair sorted, then the pairs sorted."""
    p, q = tuple(sorted((a, b))), tuple(sorted((c, d)))
    if len({*p, *q}) != 4:
        raise InputError(f"quartet {a}{b}|{c}{d} repeats a taxon")
    return (p, q) if p < q else (q, p)


def format_quartet(q) -> str:
    (a, b), (c, d) = q
    return f"{a}{b}|{c}{d}" if all(len(x) == 1 for x in (a, b, c, d)) else f"{a},{b}|{c},{d}"


def _pairings(quad):
    a, b, c, d = quad
    return [quartet(a, b, c, d), quartet(a, c, b, d), quartet(a, d, b, c)]


@dataclass(frozen=True)
class QuartetSystem:
    taxa: frozenset
    quartets: frozenset

    def __post_init__(self):
        for (a, b), (c, d) in self.quartets:
            for x in (a, b, c, d):
                if x not in self.taxa:
                    raise InputError(f"quartet taxon {x!r} not in the taxa set")

    def __contains__(self, q):
        return q in self.quartets

    def __len__(self):
        return len(self.quartets)

    def sorted(self) -> list:
        return sorted(self.quartets)


def displayed_quartets(t: Tree) -> QuartetSystem:
    """ab|cd is displayed iff med(a,b,c) = med(a,b,d) differs from med(a,c,d) = med(b,c,d)."""
    med = all_medians(t)

    def m(x, y, z):
        return med[tuple(sorted((x, y, z)))]

    out = set()
    for quad in itertools.combinations(t.sorted_taxa(), 4):
        for (a, b), (c, d) in _pairings(quad):
            p = m(a, b, c)
            if p == m(a, b, d) and m(a, c, d) == m(b, c, d) and p != m(a, c, d):
                out.add(((a, b), (c, d)))
    return QuartetSystem(t.taxon_set, frozenset(out))


@dataclass
class PropertyReport:
    thin: bool
    transitive: bool
    saturated: bool
    complete: bool
    witnesses: dict


def check_properties(q: QuartetSystem) -> PropertyReport:
    """The four predicates, each with a first counterexample when false."""
    taxa = sorted(q.taxa)
    wit = {}
    for quad in itertools.combinations(taxa, 4):
        present = [p for p in _pairings(quad) if p in q]
        if len(present) > 1 and "thin" not in wit:
            wit["thin"] = tuple(present)
        if not present and "complete" not in wit:
            wit["complete"] = quad
    for five in itertools.combinations(taxa, 5):
        if "transitive" in wit and "saturated" in wit:
            break
        for a, b, c, d, e in itertools.permutations(five):
            if "transitive" not in wit and a < b and c < d:
                if quartet(a, b, c, e) in q and quartet(a, b, d, e) in q \
                        and quartet(a, b, c, d) not in q:
                    wit["transitive"] = (quartet(a, b, c, e), quartet(a, b, d, e))
            if "saturated" not in wit and quartet(a, b, c, d) in q:
                if quartet(a, e, c, d) not in q and quartet(a, b, c, e) not in q:
                    wit["saturated"] = (quartet(a, b, c, d), e)
    return PropertyReport("thin" not in wit, "transitive" not in wit,
                          "saturated" not in wit, "complete" not in wit, wit)


def _star(taxa) -> Tree:
    if len(taxa) == 1:
        return Tree.single(taxa[0])
    if len(taxa) == 2:
        return Tree.from_edges([(taxa[0], taxa[1])])
    return Tree.from_edges([(("q", 0), x) for x in taxa])


def _placements(t: Tree, z, fresh):
    for v in sorted(t.inner_vertices(), key=repr):
        adj = {u: set(ns) for u, ns in t.adj.items()}
        adj[v].add(z)
        adj[z] = {v}
        yield _mk(adj, t, z)
    for e in sorted(t.edges(), key=lambda e: sorted(map(repr, e))):
        u, w = sorted(e, key=repr)
        adj = {x: set(ns) for x, ns in t.adj.items()}
        adj[u].discard(w)
        adj[w].discard(u)
        adj[fresh] = {u, w, z}
        adj[u].add(fresh)
        adj[w].add(fresh)
        adj[z] = {fresh}
        yield _mk(adj, t, z)


def _mk(adj, t, z):
    taxa = dict(t.taxa)
    taxa[z] = z
    return Tree({u: frozenset(ns) for u, ns in adj.items()}, taxa)


def tree_from_quartets(q: QuartetSystem, order=None) -> Tree:
    """The phylogenetic tree displaying exactly ``q``.

    Taxa are inserted one at a time (lexicographically unless ``order`` is
    given); each new taxon must have exactly one position consistent with the
    quartets it forms with already placed taxa.
    """
    taxa = list(order) if order is not None else sorted(q.taxa)
    if set(taxa) != set(q.taxa) or len(taxa) != len(q.taxa):
        raise InputError("insertion order must list every taxon once")
    if not taxa:
        raise InputError("empty taxa set")
    t = _star(sorted(taxa[:3]))
    placed = list(taxa[:3])
    for i, z in enumerate(taxa[3:]):
        want = {qq for qq in q.quartets if z in qq[0] + qq[1]
                and all(x in placed or x == z for x in qq[0] + qq[1])}
        ok = []
        for cand in _placements(t, z, ("q", i + 1)):
            got = _quartets_with(cand, z, placed)
            if got == want:
                ok.append(cand)
        if not ok:
            raise NoPlacement(f"no position for {z} fits the quartets", witness=z)
        if len(ok) > 1:
            raise AmbiguousPlacement(f"{z} fits {len(ok)} positions", witness=z)
        t = ok[0]
        placed.append(z)
    if displayed_quartets(t).quartets != q.quartets:
        raise Inconsistent("rebuilt tree does not display exactly the input quartets")
    return t


def _quartets_with(t: Tree, z, placed) -> set:
    med = all_medians(t)

    def m(x, y, w):
        return med[tuple(sorted((x, y, w)))]

    out = set()
    for a, b, c in itertools.combinations(placed, 3):
        for (x, y), (u, w) in _pairings((a, b, c, z)):
            p = m(x, y, u)
            if p == m(x, y, w) and m(x, u, w) == m(y, u, w) and p != m(x, u, w):
                out.add(((x, y), (u, w)))
    return out


def parse_quartets(text: str) -> QuartetSystem:
    taxa = set()
    out = set()
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = raw.rstrip("\r\n").split("\t")
        if parts[0] == "taxa":
            taxa.update(x for p in parts[1:] for x in p.split(",") if x)
            continue
        if len(parts) != 5 or parts[2] != "|":
            raise InputError(f"line {lineno}: expected 'a<TAB>b<TAB>|<TAB>c<TAB>d'")
        a, b, _, c, d = parts
        for x in (a, b, c, d):
            if not TAXON_RE.match(x):
                raise InputError(f"line {lineno}: invalid taxon {x!r}")
        out.add(quartet(a, b, c, d))
        taxa.update((a, b, c, d))
    return QuartetSystem(frozenset(taxa), frozenset(out))


def format_quartets(q: QuartetSystem) -> str:
    lines = ["taxa\t" + ",".join(sorted(q.taxa))]
    lines += [f"{a}\t{b}\t|\t{c}\t{d}" for (a, b), (c, d) in q.sorted()]
    return "\n".join(lines) + "\n"


__all__ = ["QuartetSystem", "quartet", "displayed_quartets", "check_properties",
           "tree_from_quartets", "parse_quartets", "format_quartets", "canonical_form"]
