"""Rare-event relations derived from 0/1 edge-labelled trees, and the inverse
problem: validate a relation, build its quotient graph and reconstruct the
minimally resolved trees (unrooted, rooted, mixed) and all binary explainers.

A leaf pair is Zero when its path carries only 0-labels and single-1 (SymOne)
when it carries exactly one 1.  On a rooted tree, a DirOne record a -> b
means the lca-to-a path is all 0 and the lca-to-b path has exactly one 1.
UnkOne marks a single-1 pair whose direction is unknown.
"""
from __future__ import annotations

import itertools
import warnings
from dataclasses import dataclass, field
from math import prod

from .errors import (ClassInconsistency, Degree2Root, DuplicatePair, InputError,
                     InPointerConflict, InvalidRootChoice, MixedKindConflict, NoCentralVertex,
                     NoSource, NotEquivalence, NotForest, NotRooted, TaxaMismatch, TooLarge,
                     TwoComponents, UnknownRepresentative, ZeroOneConflict, Disconnected)
from .tree import (TAXON_RE, Tree, _Rooted, contract_edge, edge_key, leaf_path_sums)

ZERO, SYM, DIR, UNK = "Z", "S", "D", "U"
KINDS = (ZERO, SYM, DIR, UNK)
ONE_KINDS = (SYM, DIR, UNK)

SYMMETRIC, DIRECTED, MIXED = "symmetric", "directed", "mixed"
HUB = ("z",)


def prime(v):
    return ("p", v)


@dataclass(frozen=True)
class EventRelation:
    """Taxa plus at most one typed record per unordered pair.

    ``records`` maps ``frozenset({a, b})`` to ``(a, b, kind)``.  For DirOne the
    tuple order is the direction; for other kinds it is sorted.
    """
    taxa: frozenset
    records: dict = field(hash=False, compare=False)

    @classmethod
    def from_records(cls, records, taxa=()) -> "EventRelation":
        all_taxa = set(taxa)
        table: dict = {}
        for a, b, kind in records:
            if kind not in KINDS:
                raise InputError(f"unknown record kind {kind!r}")
            if a == b:
                raise InputError(f"record relates {a!r} to itself", witness=(a, b))
            for x in (a, b):
                if not TAXON_RE.match(x):
                    raise InputError(f"invalid taxon token {x!r}")
            key = frozenset((a, b))
            if kind != DIR and a > b:
                a, b = b, a
            if key in table:
                old = table[key][2]
                if (old == ZERO) != (kind == ZERO):
                    raise ZeroOneConflict(f"pair {a},{b} is both Zero and single-1",
                                          witness=tuple(sorted(key)))
                raise DuplicatePair(f"pair {a},{b} listed twice", witness=tuple(sorted(key)))
            table[key] = (a, b, kind)
            all_taxa.update((a, b))
        return cls(frozenset(all_taxa), table)

    @property
    def mode(self) -> str:
        kinds = {rec[2] for rec in self.records.values()}
        if UNK in kinds:
            return MIXED
        if DIR in kinds:
            return MIXED if SYM in kinds else DIRECTED
        return SYMMETRIC

    def kind(self, a, b):
        rec = self.records.get(frozenset((a, b)))
        return rec[2] if rec else None

    def record_set(self) -> frozenset:
        return frozenset(self.records.values())

    def sorted_records(self) -> list[tuple]:
        return sorted(self.records.values())

    def __eq__(self, other):
        if not isinstance(other, EventRelation):
            return NotImplemented
        return self.taxa == other.taxa and self.record_set() == other.record_set()

    def __hash__(self):
        return hash((self.taxa, self.record_set()))


# ---------------------------------------------------------------------------
# derivation

def derive_relation(t: Tree, mode: str = SYMMETRIC) -> EventRelation:
    """Zero / single-1 (or directed single-1) relation of a labelled tree."""
    if t.labels is None:
        raise InputError("tree carries no edge labels")
    if mode in ("sym", SYMMETRIC):
        sums = leaf_path_sums(t)
        table = {}
        for (a, b), s in sums.items():
            if a < b and s <= 1:
                table[frozenset((a, b))] = (a, b, ZERO if s == 0 else SYM)
        return EventRelation(t.taxon_set, table)
    if mode not in ("dir", DIRECTED):
        raise InputError(f"unknown mode {mode!r}")
    if len(t.adj) == 1:
        return EventRelation(t.taxon_set, {})
    if t.root is None:
        raise NotRooted("directed relations need a rooted tree")
    hung = _Rooted(t, t.root)
    depth_sum = {t.root: 0}
    for v in sorted(hung.depth, key=hung.depth.get):
        p = hung.parent[v]
        if p is not None:
            depth_sum[v] = depth_sum[p] + t.labels[frozenset((v, p))]
    names = sorted(t.taxa.items(), key=lambda kv: kv[1])
    table = {}
    for i, (va, a) in enumerate(names):
        for vb, b in names[i + 1:]:
            w = hung.lca(va, vb)
            sa = depth_sum[va] - depth_sum[w]
            sb = depth_sum[vb] - depth_sum[w]
            if sa == 0 and sb == 0:
                table[frozenset((a, b))] = (a, b, ZERO)
            elif sa == 0 and sb == 1:
                table[frozenset((a, b))] = (a, b, DIR)
            elif sa == 1 and sb == 0:
                table[frozenset((a, b))] = (b, a, DIR)
    return EventRelation(t.taxon_set, table)


def explains(t: Tree, r: EventRelation) -> bool:
    """Whether the labelled tree reproduces ``r`` exactly.

    Mixed relations: DirOne records must match, and every SymOne/UnkOne pair
    must be single-1 in one of the two directions.
    """
    if t.taxon_set != r.taxa:
        raise TaxaMismatch("tree taxa differ from relation taxa",
                           witness=sorted(t.taxon_set ^ r.taxa))
    mode = r.mode
    if mode == SYMMETRIC:
        return derive_relation(t, SYMMETRIC).record_set() == r.record_set()
    if t.root is None and len(t.adj) > 1:
        return False
    got = derive_relation(t, DIRECTED).records
    if got.keys() != r.records.keys():
        return False
    for key, (a, b, kind) in r.records.items():
        ga, gb, gkind = got[key]
        if kind == ZERO:
            if gkind != ZERO:
                return False
        elif kind == DIR:
            if (ga, gb, gkind) != (a, b, DIR):
                return False
        elif gkind != DIR:
            return False
    return True


# ---------------------------------------------------------------------------
# quotient graph

@dataclass
class Component:
    """One connected component of the quotient graph, on class representatives.

    ``arcs`` holds ``(u, v, kind)``; DirOne arcs point u -> v.
    """
    vertices: tuple
    arcs: tuple

    def neighbors(self) -> dict:
        nb = {v: [] for v in self.vertices}
        for u, v, _ in self.arcs:
            nb[u].append(v)
            nb[v].append(u)
        return nb

    def inner(self) -> list:
        return sorted(v for v, ns in self.neighbors().items() if len(ns) >= 2)


@dataclass
class QuotientGraph:
    taxa: frozenset
    mode: str
    classes: dict          # representative -> sorted tuple of members
    class_of: dict         # taxon -> representative
    arcs: dict             # frozenset of reps -> (u, v, kind)
    components: list       # list[Component], ordered by smallest representative

    def is_discrete(self) -> bool:
        return all(len(m) == 1 for m in self.classes.values())

    def is_connected(self) -> bool:
        return len(self.components) == 1


class _UnionFind:
    def __init__(self, items):
        self.parent = {x: x for x in items}

    def find(self, x):
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, a, b) -> bool:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        if rb < ra:
            ra, rb = rb, ra
        self.parent[rb] = ra
        return True


def _bfs_path(adj, start, goal):
    prev = {start: None}
    queue = [start]
    for u in queue:
        if u == goal:
            break
        for v in sorted(adj.get(u, ())):
            if v not in prev:
                prev[v] = u
                queue.append(v)
    path = [goal]
    while path[-1] != start:
        path.append(prev[path[-1]])
    return path[::-1]


def build_quotient(r: EventRelation) -> QuotientGraph:
    """Validate ``r`` and build its quotient graph on the Zero classes."""
    taxa = sorted(r.taxa)
    uf = _UnionFind(taxa)
    zero_adj: dict = {}
    for a, b, kind in r.records.values():
        if kind == ZERO:
            uf.union(a, b)
            zero_adj.setdefault(a, set()).add(b)
            zero_adj.setdefault(b, set()).add(a)
    members: dict = {}
    for x in taxa:
        members.setdefault(uf.find(x), []).append(x)
    classes = {rep: tuple(ms) for rep, ms in members.items()}
    class_of = {x: uf.find(x) for x in taxa}

    # Zero must already be transitively closed
    for rep, ms in sorted(classes.items()):
        for a, b in itertools.combinations(ms, 2):
            kind = r.kind(a, b)
            if kind == ZERO:
                continue
            path = _bfs_path(zero_adj, a, b)
            if kind is not None:
                raise ZeroOneConflict(f"{a},{b} are Zero-connected through {','.join(path)} "
                                      f"but recorded as single-1", witness=(a, b))
            x, y, z = path[0], path[1], path[2]
            for i in range(len(path) - 2):
                if r.kind(path[i], path[i + 2]) != ZERO:
                    x, y, z = path[i:i + 3]
                    break
            raise NotEquivalence(f"{x}~0{y} and {y}~0{z} but not {x}~0{z}", witness=(x, y, z))

    mode = r.mode
    # one-relations must be constant across every pair of classes
    seen: dict = {}
    for a, b, kind in sorted(r.records.values()):
        if kind == ZERO:
            continue
        ca, cb = class_of[a], class_of[b]
        if mode == MIXED and kind == SYM:
            kind = UNK
        key = frozenset((ca, cb))
        arc = (ca, cb, kind) if kind == DIR else (min(ca, cb), max(ca, cb), kind)
        if key in seen:
            if seen[key][0] != arc:
                old = seen[key][1]
                raise MixedKindConflict(
                    f"classes of {a} and {b} are related by two kinds: {old} and {(a, b, kind)}",
                    witness=(old, (a, b, kind)))
        else:
            seen[key] = (arc, (a, b, kind))
    for key, (arc, rec) in seen.items():
        ca, cb = sorted(key)
        for x in classes[ca]:
            for y in classes[cb]:
                if r.kind(x, y) is None:
                    raise ClassInconsistency(
                        f"{rec[0]},{rec[1]} are single-1 but {x},{y} are unrelated",
                        witness=((rec[0], rec[1]), tuple(sorted((x, y)))))
    arcs = {key: arc for key, (arc, _) in seen.items()}

    # the quotient must be a forest
    forest = _UnionFind(sorted(classes))
    adj: dict = {}
    for key in sorted(arcs, key=lambda k: sorted(k)):
        u, v = sorted(key)
        if not forest.union(u, v):
            cycle = _bfs_path(adj, u, v)
            start = cycle.index(min(cycle))
            cycle = cycle[start:] + cycle[:start]
            if len(cycle) > 2 and cycle[-1] < cycle[1]:
                cycle = cycle[:1] + cycle[:0:-1]
            raise NotForest(f"single-1 cycle {','.join(cycle)}", witness=tuple(cycle))
        adj.setdefault(u, set()).add(v)
        adj.setdefault(v, set()).add(u)

    into: dict = {}
    for u, v, kind in sorted(arcs.values()):
        if kind == DIR:
            if v in into:
                w = into[v]
                raise InPointerConflict(f"{w} -> {v} and {u} -> {v}", witness=(w, u, v))
            into[v] = u

    comps: dict = {}
    for rep in sorted(classes):
        comps.setdefault(forest.find(rep), []).append(rep)
    components = []
    for root in sorted(comps):
        vs = tuple(comps[root])
        vset = set(vs)
        cas = tuple(sorted(a for a in arcs.values() if a[0] in vset))
        components.append(Component(vs, cas))
    return QuotientGraph(r.taxa, mode, classes, class_of, arcs, components)


# ---------------------------------------------------------------------------
# reconstruction

def _source(comp: Component):
    heads = {v for _, v, kind in comp.arcs if kind == DIR}
    if any(kind != DIR for _, _, kind in comp.arcs):
        raise NoSource("component has arcs of unknown direction")
    sources = [v for v in comp.vertices if v not in heads]
    if len(sources) != 1:
        raise NoSource(f"component has {len(sources)} vertices without an incoming arc",
                       witness=tuple(sources))
    return sources[0]


def _component_edges(comp: Component, directed: bool):
    """Edges of the minimally resolved tree of a component, plus its attachment vertex."""
    inner = set(comp.inner())
    src = None
    if directed:
        src = _source(comp)
        inner.add(src)
    edges = []
    for u, v, _ in comp.arcs:
        edges.append((prime(u) if u in inner else u, prime(v) if v in inner else v, 1))
    for u in sorted(inner):
        edges.append((u, prime(u), 0))
    if directed:
        top = prime(src)
    else:
        top = prime(min(inner)) if inner else None
    return edges, top


def minimally_resolved_component(comp: Component, directed: bool = False) -> Tree:
    """The unique minimally resolved tree of one component.

    Every inner vertex u of the component gets a copy u' joined to u by a
    0-edge; component edges become 1-edges between the copies.  In the
    directed case the source also gets a copy, which becomes the root.
    """
    if len(comp.vertices) == 1:
        return Tree.single(comp.vertices[0])
    edges, top = _component_edges(comp, directed)
    return Tree.from_edges(edges, root=top if directed else None)


def minimally_resolved_forest(g: QuotientGraph, root_choice=None, directed=None) -> Tree:
    """Minimally resolved tree of the whole quotient (on class representatives).

    Several components are joined by a hub z through 1-edges.  An isolated
    class hangs directly off z; a single-edge component vw is subdivided by
    a vertex joined by a 0-edge to one endpoint (the tail if directed, else the
    one with the larger Zero class, ties to the smaller name); a larger component is attached at the copy of its smallest
    inner vertex (its source copy, if directed).  In directed mode the root is
    z by default, or the attachment vertex of the component whose source is
    named by ``root_choice``.
    """
    if directed is None:
        directed = g.mode != SYMMETRIC
    comps = g.components
    if len(comps) == 1:
        comp = comps[0]
        t = minimally_resolved_component(comp, directed)
        if root_choice is not None and (not directed or len(comp.vertices) == 1
                                        or root_choice != _source(comp)):
            raise InvalidRootChoice(f"{root_choice!r} is not a valid root", witness=root_choice)
        return t
    edges = []
    attach = {}
    for comp in comps:
        if len(comp.vertices) == 1:
            edges.append((HUB, comp.vertices[0], 1))
            continue
        if len(comp.vertices) == 2 and not directed:
            v, w = comp.vertices
            # the 0-side absorbs its Zero class on expansion, so prefer the larger class
            if len(g.classes[w]) > len(g.classes[v]):
                v, w = w, v
            x = prime(v)
            edges += [(x, v, 0), (x, w, 1), (HUB, x, 1)]
            attach[v] = x
            continue
        sub, top = _component_edges(comp, directed)
        edges += sub
        edges.append((HUB, top, 1))
        attach[_source(comp) if directed else top[1]] = top
    if len(comps) == 2:
        warnings.warn("the hub has degree two", Degree2Root, stacklevel=2)
    root = None
    if directed:
        if root_choice in (None, "z", HUB):
            root = HUB
        elif root_choice in attach:
            root = attach[root_choice]
        else:
            raise InvalidRootChoice(f"{root_choice!r} is not a component source or 'z'",
                                    witness=root_choice)
    elif root_choice is not None:
        raise InvalidRootChoice("undirected reconstructions are unrooted", witness=root_choice)
    return Tree.from_edges(edges, root=root)


def expand_classes(t: Tree, classes: dict) -> Tree:
    """Re-attach every member of each Zero class next to its representative.

    A representative on a 0-edge to an inner vertex w gets its class mates
    attached to w by 0-edges; otherwise the representative leaf is replaced by
    a hub carrying the old edge and 0-edges to every member.
    """
    reps = set(classes)
    unknown = reps - t.taxon_set
    if unknown or t.taxon_set - reps:
        raise UnknownRepresentative("tree leaves must be exactly the class representatives",
                                    witness=sorted(unknown or (t.taxon_set - reps)))
    if all(len(ms) == 1 for ms in classes.values()):
        return t
    if len(t.adj) == 1:
        (rep,) = classes
        ms = sorted(classes[rep])
        if len(ms) == 2:
            return Tree.from_edges([(ms[0], ms[1], 0)])
        return Tree.from_edges([(("h", rep), m, 0) for m in ms])
    adj = {v: set(ns) for v, ns in t.adj.items()}
    labels = dict(t.labels)
    for rep in sorted(classes):
        ms = [m for m in classes[rep] if m != rep]
        if not ms:
            continue
        v = t.vertex_of(rep)
        (w,) = adj[v]
        if labels[edge_key(v, w)] == 0 and w not in t.taxa:
            for m in ms:
                adj[w].add(m)
                adj[m] = {w}
                labels[edge_key(w, m)] = 0
        else:
            h = ("h", rep)
            lab = labels.pop(edge_key(v, w))
            adj[w].discard(v)
            adj[w].add(h)
            adj[h] = {w}
            labels[edge_key(w, h)] = lab
            adj[v] = {h}
            adj[h].add(v)
            labels[edge_key(h, v)] = 0
            for m in ms:
                adj[h].add(m)
                adj[m] = {h}
                labels[edge_key(h, m)] = 0
    taxa = {v: v for v, ns in adj.items() if len(ns) == 1}
    return Tree({v: frozenset(ns) for v, ns in adj.items()}, taxa, t.root, labels, None)


def reconstruct(r: EventRelation, root_choice=None) -> Tree:
    """Minimally resolved explaining tree on all taxa (symmetric or directed)."""
    g = build_quotient(r)
    if g.mode == MIXED:
        raise InputError("mixed relations have several admissible roots; "
                         "use admissible_rooted_trees")
    return expand_classes(minimally_resolved_forest(g, root_choice), g.classes)


def is_least_resolved(t: Tree, r: EventRelation, structural: bool = False) -> bool:
    """True iff no single interior-edge contraction still explains ``r``.

    With ``structural`` the answer is read off the labels instead: every
    interior edge is a 1-edge and every inner vertex has exactly one 0-edge.
    That reading is only valid for a connected quotient with discrete Zero.
    """
    if structural:
        g = build_quotient(r)
        if not g.is_connected() or not g.is_discrete():
            raise Disconnected("structural criterion needs a connected, discrete quotient")
        for v in t.inner_vertices():
            zeros = sum(1 for w in t.adj[v] if t.labels[edge_key(v, w)] == 0)
            if zeros != 1:
                return False
        return all(t.labels[e] == 1 for e in t.interior_edges())
    for e in t.interior_edges():
        u, v = tuple(e)
        if explains(contract_edge(t, (u, v)), r):
            return False
    return True


# ---------------------------------------------------------------------------
# binary explainers

def double_factorial(n: int) -> int:
    return prod(range(n, 0, -2)) if n > 0 else 1


def binary_tree_count(k: int) -> int:
    """Number of unrooted binary trees on k labelled leaves."""
    return double_factorial(2 * k - 5) if k >= 3 else 1


def local_star_type(t: Tree, v) -> str:
    zeros = sum(1 for w in t.adj[v] if t.labels[edge_key(v, w)] == 0)
    if zeros == 0:
        return "a"
    if zeros == 1:
        return "b"
    raise ValueError(f"vertex {v!r} has {zeros} incident 0-edges")


def binary_count_formula(t: Tree) -> int:
    """Number of binary trees the local replacement yields from one least resolved tree."""
    total = 1
    for v in t.inner_vertices():
        k = len(t.adj[v])
        if k <= 3:
            continue
        kind = local_star_type(t, v)
        total *= binary_tree_count(k) * (2 ** (k - 3) if kind == "a" else 1)
    return total


def least_resolved_trees(r: EventRelation) -> list[Tree]:
    """All least resolved trees explaining a symmetric relation with discrete Zero.

    Connected quotients have exactly one.  Otherwise every phylogenetic tree on
    the taxa is tried with all terminal labelings; interior edges are fixed to
    1 because an interior 0-edge can always be contracted.
    """
    g = build_quotient(r)
    if not g.is_discrete():
        raise InputError("least resolved tree search needs a discrete Zero relation")
    if g.is_connected():
        return [minimally_resolved_component(g.components[0])]
    from .oracles import enumerate_phylo_trees, MAX_TAXA
    if len(r.taxa) > MAX_TAXA:
        raise TooLarge(f"least resolved search is limited to {MAX_TAXA} classes")
    out = []
    for topo in enumerate_phylo_trees(sorted(r.taxa)):
        edges = topo.edges()
        terminal = [e for e in edges if e & topo.taxa.keys()]
        base = {e: 1 for e in edges}
        for bits in itertools.product((0, 1), repeat=len(terminal)):
            labels = dict(base)
            labels.update(zip(terminal, bits))
            cand = topo.with_labels(labels)
            if explains(cand, r) and is_least_resolved(cand, r):
                out.append(cand)
    return out


def _binary_shapes(leaves: list) -> list[list[tuple]]:
    """Every unrooted binary tree on ``leaves`` as edge lists with fresh inner ids."""
    k = len(leaves)
    if k == 3:
        c = ("i", 0)
        return [[(c, x) for x in leaves]]
    out = []
    for shape in _binary_shapes(leaves[:-1]):
        new_inner = ("i", k - 3)
        for i, (u, w) in enumerate(shape):
            rest = shape[:i] + shape[i + 1:]
            out.append(rest + [(u, new_inner), (new_inner, w), (new_inner, leaves[-1])])
    return out


def _resolve_vertex(t: Tree, v0, rel_one: dict, tag) -> list[Tree]:
    """All binary replacements (with admissible labels) of the star at ``v0``."""
    nbrs = sorted(t.adj[v0], key=repr)
    kind = local_star_type(t, v0)
    lab0 = {w: t.labels[edge_key(v0, w)] for w in nbrs}
    # the side of v0 each leaf lies on
    side = {}
    for w in nbrs:
        stack = [w]
        seen = {v0, w}
        while stack:
            u = stack.pop()
            if u in t.taxa:
                side[t.taxa[u]] = w
            for x in t.adj[u]:
                if x not in seen:
                    seen.add(x)
                    stack.append(x)
    placeholders = [("n", i) for i in range(len(nbrs))]
    back = dict(zip(placeholders, nbrs))
    out = []
    for shape in _binary_shapes(placeholders):
        fresh = {}
        edges = []
        for a, b in shape:
            a2 = back.get(a) or fresh.setdefault(a, ("r", tag, a[1]))
            b2 = back.get(b) or fresh.setdefault(b, ("r", tag, b[1]))
            edges.append((a2, b2))
        terminal = {}
        interior = []
        for a, b in edges:
            if a in lab0:
                terminal[edge_key(a, b)] = lab0[a]
            elif b in lab0:
                terminal[edge_key(a, b)] = lab0[b]
            else:
                interior.append(edge_key(a, b))
        forced = {}
        if kind == "b":
            vj = next(w for w in nbrs if lab0[w] == 0)
            vj_taxon = t.taxa[vj]
            targets = {side[y] for y in rel_one.get(vj_taxon, ())} - {vj}
            local = {}
            for a, b in edges:
                local.setdefault(a, set()).add(b)
                local.setdefault(b, set()).add(a)
            for target in targets:
                path = _bfs_path_any(local, vj, target)
                for a, b in zip(path, path[1:]):
                    key = edge_key(a, b)
                    if key in interior:
                        forced[key] = 0
        free = [e for e in interior if e not in forced]
        adj = {u: set(ns) for u, ns in t.adj.items() if u != v0}
        for w in nbrs:
            adj[w].discard(v0)
        base = {e: l for e, l in t.labels.items() if v0 not in e}
        for a, b in edges:
            adj.setdefault(a, set()).add(b)
            adj.setdefault(b, set()).add(a)
        base.update(terminal)
        base.update(forced)
        frozen_adj = {u: frozenset(ns) for u, ns in adj.items()}
        for bits in itertools.product((0, 1), repeat=len(free)):
            labels = dict(base)
            labels.update(zip(free, bits))
            out.append(Tree(frozen_adj, dict(t.taxa), None, labels, None))
    return out


def _bfs_path_any(adj, start, goal):
    prev = {start: None}
    queue = [start]
    for u in queue:
        if u == goal:
            break
        for v in adj[u]:
            if v not in prev:
                prev[v] = u
                queue.append(v)
    path = [goal]
    while path[-1] != start:
        path.append(prev[path[-1]])
    return path[::-1]


def expand_to_binary(t: Tree, r: EventRelation) -> list[Tree]:
    """Apply the local replacement to every vertex of degree > 3 of ``t``."""
    rel_one: dict = {}
    for a, b, kind in r.records.values():
        if kind != ZERO:
            rel_one.setdefault(a, set()).add(b)
            rel_one.setdefault(b, set()).add(a)
    current = [t]
    for tag, v0 in enumerate(sorted((v for v in t.inner_vertices() if len(t.adj[v]) > 3), key=repr)):
        nxt = []
        for cand in current:
            nxt.extend(_resolve_vertex(cand, v0, rel_one, tag))
        current = nxt
    return current


def enumerate_binary(r: EventRelation, allow_degree2_root: bool = False) -> list[Tree]:
    """All pairwise non-isomorphic binary labelled trees explaining ``r``.

    Works on the quotient: Zero classes are represented by their smallest
    member.  With exactly two components no binary tree exists; the result is
    empty (TwoComponents warning) unless ``allow_degree2_root`` is set, in
    which case the binary resolutions of the degree-2 hub tree are returned.
    """
    from .tree import canonical_form
    g = build_quotient(r)
    if g.mode != SYMMETRIC:
        raise InputError("binary enumeration is defined for symmetric relations")
    q = quotient_relation(g)
    if len(g.components) == 2:
        if not allow_degree2_root:
            warnings.warn("two components: no binary tree explains the relation",
                          TwoComponents, stacklevel=2)
            return []
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", Degree2Root)
            lrts = [minimally_resolved_forest(g)]
    else:
        lrts = least_resolved_trees(q)
    seen = {}
    for lrt in lrts:
        for cand in expand_to_binary(lrt, q):
            seen.setdefault(canonical_form(cand), cand)
    return [seen[k] for k in sorted(seen)]


def quotient_relation(g: QuotientGraph) -> EventRelation:
    """The relation restricted to class representatives."""
    recs = [arc for arc in g.arcs.values()]
    return EventRelation.from_records(recs, taxa=g.classes.keys())


# ---------------------------------------------------------------------------
# mixed relations

def _oriented_from(comp: Component, v) -> tuple[Component, bool]:
    """Orient every arc away from ``v``; the flag says whether that was possible."""
    nb = comp.neighbors()
    dist = {v: 0}
    queue = [v]
    for u in queue:
        for w in nb[u]:
            if w not in dist:
                dist[w] = dist[u] + 1
                queue.append(w)
    arcs = []
    ok = True
    for a, b, kind in comp.arcs:
        near, far = (a, b) if dist[a] < dist[b] else (b, a)
        if kind == DIR and near != a:
            ok = False
        arcs.append((near, far, DIR))
    return Component(comp.vertices, tuple(sorted(arcs))), ok


def central_vertices(comp: Component) -> list:
    """Vertices from which every related pair has an arc pointing away."""
    return [v for v in comp.vertices if _oriented_from(comp, v)[1]]


@dataclass(frozen=True)
class RootDescriptor:
    component: object      # component index, or "*" for the hub
    vertex: object         # central vertex (class representative), or "hub"
    centers: tuple         # chosen central vertex per component


def admissible_rooted_trees(r: EventRelation) -> list[tuple[RootDescriptor, Tree]]:
    """Every rooted minimally resolved tree compatible with a mixed relation.

    For each component and each central vertex, unknown-direction arcs are
    oriented away from it.  With several components every combination of
    centers is joined through the hub, rooted either at the hub or at one
    component's root.  Empty (NoCentralVertex warning) when some component has
    no central vertex.
    """
    g = build_quotient(r)
    centers = []
    for comp in g.components:
        cs = central_vertices(comp) if len(comp.vertices) > 1 else [comp.vertices[0]]
        if not cs:
            warnings.warn(f"component {','.join(comp.vertices)} has no central vertex",
                          NoCentralVertex, stacklevel=2)
            return []
        centers.append(cs)
    out = []
    for choice in itertools.product(*centers):
        comps = [_oriented_from(c, v)[0] if len(c.vertices) > 1 else c
                 for c, v in zip(g.components, choice)]
        og = QuotientGraph(g.taxa, DIRECTED, g.classes, g.class_of,
                           {frozenset(a[:2]): a for c in comps for a in c.arcs}, comps)
        if len(comps) == 1:
            t = minimally_resolved_forest(og, directed=True)
            out.append((RootDescriptor(0, choice[0], choice), expand_classes(t, g.classes)))
            continue
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", Degree2Root)
            t = minimally_resolved_forest(og, "z", directed=True)
            out.append((RootDescriptor("*", "hub", choice), expand_classes(t, g.classes)))
            for i, (c, v) in enumerate(zip(comps, choice)):
                if len(c.vertices) > 1:
                    t = minimally_resolved_forest(og, v, directed=True)
                    out.append((RootDescriptor(i, v, choice), expand_classes(t, g.classes)))
    return out


# ---------------------------------------------------------------------------
# text format

def parse_relation(text: str) -> EventRelation:
    taxa = []
    records = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = raw.rstrip("\r\n").split("\t")
        if parts[0] == "taxa":
            if len(parts) != 2:
                raise InputError(f"line {lineno}: expected 'taxa<TAB>a,b,c'")
            names = [x for x in parts[1].split(",") if x]
            for x in names:
                if not TAXON_RE.match(x):
                    raise InputError(f"line {lineno}: invalid taxon {x!r}")
            taxa.extend(names)
            continue
        if len(parts) != 3 or parts[2] not in KINDS:
            raise InputError(f"line {lineno}: expected 'a<TAB>b<TAB>K' with K in Z,S,D,U")
        records.append((parts[0], parts[1], parts[2]))
    if len(set(taxa)) != len(taxa):
        raise InputError("taxa line lists a taxon twice")
    return EventRelation.from_records(records, taxa)


def format_relation(r: EventRelation) -> str:
    lines = ["taxa\t" + ",".join(sorted(r.taxa))]
    lines += [f"{a}\t{b}\t{k}" for a, b, k in r.sorted_records()]
    return "\n".join(lines) + "\n"
