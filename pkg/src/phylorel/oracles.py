"""Exhaustive small-instance machinery: trees, labelings, datings and
brute-force explainer search.  Everything here is deliberately naive so it
can serve as an independent check on the constructive algorithms.
"""
from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, Iterator

from .errors import InputError, TooLarge
from .relations import SYMMETRIC, DIRECTED, EventRelation, derive_relation, explains
from .tree import Tree, canonical_form, edge_key

MAX_TAXA = 8


@dataclass
class InstanceFamily:
    taxa: tuple
    max_vertices: int | None = None
    alphabet: tuple = ()

    def __post_init__(self):
        if len(self.taxa) > MAX_TAXA:
            raise TooLarge(f"at most {MAX_TAXA} taxa", witness=len(self.taxa))


def _guard(taxa, limit=MAX_TAXA):
    if len(taxa) > limit:
        raise TooLarge(f"at most {limit} taxa (got {len(taxa)})", witness=len(taxa))
    if not taxa:
        raise InputError("need at least one taxon")


def _insertions(edges: list, n_inner: int, leaf) -> Iterator[tuple[list, int]]:
    """Every way of adding ``leaf``: attach to an inner vertex or subdivide an edge."""
    inner = sorted({v for e in edges for v in e if isinstance(v, tuple)})
    for v in inner:
        yield edges + [(v, leaf)], n_inner
    for i, (u, w) in enumerate(edges):
        x = ("v", n_inner)
        yield edges[:i] + edges[i + 1:] + [(u, x), (x, w), (x, leaf)], n_inner + 1


def _raw_trees(taxa: list) -> Iterator[list]:
    """Leaf-insertion recursion without deduplication (edge lists)."""
    if len(taxa) == 2:
        yield [(taxa[0], taxa[1])], 0
        return
    if len(taxa) == 3:
        c = ("v", 0)
        yield [(c, x) for x in taxa], 1
        return
    for edges, n_inner in _raw_trees(taxa[:-1]):
        yield from _insertions(edges, n_inner, taxa[-1])


def enumerate_phylo_trees(taxa: Iterable[str]) -> Iterator[Tree]:
    """All non-isomorphic unrooted phylogenetic trees on ``taxa``, each once."""
    taxa = sorted(taxa)
    _guard(taxa)
    if len(set(taxa)) != len(taxa):
        raise InputError("duplicate taxa")
    if len(taxa) == 1:
        yield Tree.single(taxa[0])
        return
    seen = set()
    for edges, _ in _raw_trees(taxa):
        t = Tree.from_edges(edges)
        key = canonical_form(t)
        if key not in seen:
            seen.add(key)
            yield t


def raw_tree_count(taxa) -> int:
    """Count of leaf insertions without deduplication (independent count check)."""
    taxa = sorted(taxa)
    if len(taxa) == 1:
        return 1
    return sum(1 for _ in _raw_trees(taxa))


def split_signature(t: Tree):
    """Isomorphism invariant built from leaf bipartitions, independent of canonical_form.

    Two trees on the same taxa (no degree-2 vertices except a root) are
    isomorphic, with labels and colors, iff their signatures are equal.
    """
    everything = t.taxon_set
    splits = {}
    for e in t.edges():
        u, v = tuple(e)
        side = _side(t, u, v)
        key = min(side, everything - side, key=lambda s: sorted(s))
        splits[e] = (frozenset(key), frozenset(everything - key))
    edge_part = Counter((frozenset(splits[e]), t.labels[e] if t.labels else None) for e in t.edges())
    vert_part = Counter()
    for v in t.inner_vertices():
        inc = frozenset(frozenset(splits[edge_key(v, w)]) for w in t.adj[v])
        vert_part[(inc, t.colors[v] if t.colors else None, v == t.root)] += 1
    return (t.root is not None, everything, frozenset(edge_part.items()),
            frozenset(vert_part.items()))


def _side(t: Tree, u, v) -> frozenset:
    """Taxa on u's side of edge uv."""
    seen = {u, v}
    stack = [u]
    out = set()
    while stack:
        x = stack.pop()
        if x in t.taxa:
            out.add(t.taxa[x])
        for y in t.adj[x]:
            if y not in seen:
                seen.add(y)
                stack.append(y)
    return frozenset(out)


def sorted_edges(t: Tree) -> list[frozenset]:
    return sorted(t.edges(), key=lambda e: sorted(map(repr, e)))


def enumerate_edge_labelings(t: Tree) -> Iterator[Tree]:
    edges = sorted_edges(t)
    for bits in itertools.product((0, 1), repeat=len(edges)):
        yield t.with_labels(dict(zip(edges, bits)))


def enumerate_datings(t: Tree, alphabet: Iterable[str], discriminating_only: bool = False) -> Iterator[Tree]:
    alphabet = list(alphabet)
    if not alphabet:
        raise InputError("alphabet must be non-empty")
    inner = sorted(t.inner_vertices(), key=repr) if len(t.adj) > 1 else []
    inner_edges = [tuple(e) for e in t.interior_edges()]
    for colors in itertools.product(alphabet, repeat=len(inner)):
        coloring = dict(zip(inner, colors))
        if discriminating_only and any(coloring[u] == coloring[v] for u, v in inner_edges):
            continue
        yield t.with_colors(coloring)


def rootings(t: Tree) -> Iterator[Tree]:
    """Rooted versions: at every inner vertex, and at a new vertex on every edge."""
    if len(t.adj) == 1:
        yield t
        return
    for v in sorted(t.inner_vertices(), key=repr):
        yield t.with_root(v)
    for e in sorted_edges(t):
        u, w = sorted(e, key=repr)
        yield subdivide(t, u, w, ("root",)).with_root(("root",))


def subdivide(t: Tree, u, w, x, split=None) -> Tree:
    """Insert vertex ``x`` on edge uw.  ``split`` gives (label ux, label xw)."""
    adj = {v: set(ns) for v, ns in t.adj.items()}
    adj[u].discard(w)
    adj[w].discard(u)
    adj[u].add(x)
    adj[w].add(x)
    adj[x] = {u, w}
    labels = None
    if t.labels is not None:
        labels = dict(t.labels)
        old = labels.pop(edge_key(u, w))
        a, b = split if split is not None else (old, 0)
        labels[edge_key(u, x)] = a
        labels[edge_key(x, w)] = b
    return Tree({v: frozenset(ns) for v, ns in adj.items()}, dict(t.taxa), t.root, labels, t.colors)


def relaxed_trees(taxa) -> Iterator[Tree]:
    """Phylogenetic trees plus those with one extra degree-2 vertex on an edge."""
    for t in enumerate_phylo_trees(taxa):
        yield t
        if len(t.adj) == 1:
            continue
        for e in sorted_edges(t):
            u, w = sorted(e, key=repr)
            yield subdivide(t, u, w, ("d2",))


def _candidates(taxa, rooted: bool, allow_degree2: bool) -> Iterator[Tree]:
    if rooted:
        for t in enumerate_phylo_trees(taxa):
            yield from rootings(t)
    elif allow_degree2:
        yield from relaxed_trees(taxa)
    else:
        yield from enumerate_phylo_trees(taxa)


def brute_force_explainers(r: EventRelation, max_vertices: int | None = None,
                           allow_degree2: bool = False) -> list[Tree]:
    """Every labelled tree with at most ``max_vertices`` vertices that explains ``r``.

    Symmetric relations search unrooted phylogenetic trees (optionally with one
    degree-2 vertex); directed and mixed relations search every rooting.
    """
    taxa = sorted(r.taxa)
    _guard(taxa, 6)
    limit = 2 * len(taxa) + 2
    if max_vertices is None:
        max_vertices = limit
    if max_vertices > limit:
        raise TooLarge(f"max_vertices must be at most {limit}")
    rooted = r.mode != SYMMETRIC
    out = []
    for topo in _candidates(taxa, rooted, allow_degree2):
        if len(topo.adj) > max_vertices:
            continue
        for t in enumerate_edge_labelings(topo):
            if explains(t, r):
                out.append(t)
    return out


def explainer_index(taxa, rooted: bool = False, allow_degree2: bool = True) -> dict:
    """Map every derivable relation on ``taxa`` to the fewest vertices of a tree deriving it."""
    taxa = sorted(taxa)
    _guard(taxa, 6)
    mode = DIRECTED if rooted else SYMMETRIC
    best: dict = {}
    for topo in _candidates(taxa, rooted, allow_degree2):
        n = len(topo.adj)
        for t in enumerate_edge_labelings(topo):
            rel = derive_relation(t, mode)
            if best.get(rel, n + 1) > n:
                best[rel] = n
    return best


def all_labeled_trees(taxa) -> Iterator[Tree]:
    for topo in enumerate_phylo_trees(taxa):
        yield from enumerate_edge_labelings(topo)
