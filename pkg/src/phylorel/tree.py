"""Leaf-labelled trees: data model, path queries, restriction, contraction,
canonical form and the text codec.

A :class:`Tree` is immutable.  Vertex ids are arbitrary hashables and never
leave the process; taxa (leaf names) and colors are the only persistent names.
Edge labels are non-negative integers combined by addition, so restricting a
tree to a subset of its taxa preserves every path sum.
"""
from __future__ import annotations

import re
from collections import deque
from itertools import count
from typing import Hashable, Iterable, Mapping

from .errors import (BadLabel, DuplicateTaxon, EmptySubset, InputError, NotRooted,
                     TerminalEdge, TreeSyntaxError, UnknownTaxon, UnknownVertex)

Vertex = Hashable
TAXON_RE = re.compile(r"[A-Za-z0-9_.\-]+\Z")


def edge_key(u, v) -> frozenset:
    return frozenset((u, v))


class Tree:
    """Tree with taxa on its leaves, optional root, edge labels and colors.

    ``labels`` maps ``frozenset({u, v})`` to an int and is either ``None`` or
    defined on every edge.  ``colors`` maps interior vertices to tokens and is
    either ``None`` or defined on every interior vertex.  Build instances with
    :meth:`from_edges` or :meth:`single`; the raw constructor does not validate.
    """

    __slots__ = ("adj", "taxa", "root", "labels", "colors", "_vertex_of")

    def __init__(self, adj, taxa, root=None, labels=None, colors=None):
        self.adj: dict = adj
        self.taxa: dict = taxa
        self.root = root
        self.labels: dict | None = labels
        self.colors: dict | None = colors
        self._vertex_of = {name: v for v, name in taxa.items()}

    # -- construction -----------------------------------------------------

    @classmethod
    def single(cls, taxon: str, colors=None) -> "Tree":
        return cls({taxon: frozenset()}, {taxon: taxon}, root=None, labels={}, colors=colors)

    @classmethod
    def from_edges(cls, edges: Iterable, taxa: Mapping | None = None, root=None,
                   colors: Mapping | None = None, labelled: bool | None = None) -> "Tree":
        """Build and validate a tree.

        ``edges`` holds ``(u, v)`` or ``(u, v, label)`` tuples.  Degree-one
        vertices are named by ``taxa`` when given, else by ``str(vertex)``.
        """
        adj: dict = {}
        labels: dict = {}
        n_labelled = 0
        edges = list(edges)
        for e in edges:
            u, v = e[0], e[1]
            if u == v:
                raise InputError(f"loop at {u!r}")
            key = edge_key(u, v)
            if key in labels or (v in adj.get(u, ())):
                raise InputError(f"duplicate edge {u!r}-{v!r}")
            adj.setdefault(u, set()).add(v)
            adj.setdefault(v, set()).add(u)
            if len(e) > 2 and e[2] is not None:
                lab = int(e[2])
                if lab < 0:
                    raise BadLabel(f"negative label on {u!r}-{v!r}")
                labels[key] = lab
                n_labelled += 1
            else:
                labels[key] = None
        if not adj:
            raise InputError("a tree needs at least one edge; use Tree.single")
        if n_labelled not in (0, len(edges)):
            raise BadLabel("either every edge or no edge carries a label")
        if labelled is False or n_labelled == 0:
            labels = None
        adj = {v: frozenset(ns) for v, ns in adj.items()}
        _check_tree_shape(adj)
        names = {}
        for v, ns in adj.items():
            if len(ns) == 1:
                name = taxa[v] if taxa and v in taxa else str(v)
                names[v] = name
            elif taxa and v in taxa:
                raise InputError(f"interior vertex {v!r} cannot carry a taxon")
        _check_taxa(names.values())
        if root is not None:
            if root not in adj:
                raise UnknownVertex(f"root {root!r} is not a vertex")
            if root in names:
                raise InputError("the root must be an interior vertex")
        if colors is not None:
            colors = dict(colors)
            for v in adj:
                if v not in names and v not in colors:
                    raise InputError(f"interior vertex {v!r} has no color")
            colors = {v: c for v, c in colors.items() if v not in names}
        return cls(adj, names, root, labels, colors)

    # -- derived copies ---------------------------------------------------

    def with_labels(self, labels) -> "Tree":
        return Tree(self.adj, self.taxa, self.root, labels, self.colors)

    def with_colors(self, colors) -> "Tree":
        return Tree(self.adj, self.taxa, self.root, self.labels, colors)

    def with_root(self, root) -> "Tree":
        if root is not None and (root not in self.adj or (root in self.taxa and len(self.adj) > 1)):
            raise InputError(f"cannot root at {root!r}")
        return Tree(self.adj, self.taxa, root, self.labels, self.colors)

    def topology(self) -> "Tree":
        """The same tree without labels and colors."""
        return Tree(self.adj, self.taxa, self.root, None, None)

    # -- queries ----------------------------------------------------------

    @property
    def vertices(self):
        return self.adj.keys()

    def edges(self) -> list[frozenset]:
        # ids can be of mixed types, so dedupe through a set
        return list({frozenset((u, v)) for u, ns in self.adj.items() for v in ns})

    @property
    def taxon_set(self) -> frozenset:
        return frozenset(self._vertex_of)

    def sorted_taxa(self) -> list[str]:
        return sorted(self._vertex_of)

    def vertex_of(self, taxon: str):
        try:
            return self._vertex_of[taxon]
        except KeyError:
            raise UnknownTaxon(f"unknown taxon {taxon!r}", witness=taxon) from None

    def is_leaf(self, v) -> bool:
        return v in self.taxa

    def inner_vertices(self) -> list:
        if len(self.adj) == 1:
            return list(self.adj)
        return [v for v in self.adj if v not in self.taxa]

    def degree(self, v) -> int:
        return len(self.adj[v])

    def is_interior_edge(self, u, v) -> bool:
        return u not in self.taxa and v not in self.taxa

    def interior_edges(self) -> list[frozenset]:
        return [e for e in self.edges() if not (e & self.taxa.keys())]

    def label(self, u, v) -> int:
        if self.labels is None:
            raise InputError("tree carries no edge labels")
        return self.labels[frozenset((u, v))]

    @property
    def is_rooted(self) -> bool:
        return self.root is not None

    def is_phylogenetic(self) -> bool:
        """No vertex of degree two, except a declared root."""
        if len(self.adj) <= 2:
            return True
        return all(len(ns) != 2 or v == self.root for v, ns in self.adj.items())

    def is_binary(self) -> bool:
        if len(self.adj) <= 2:
            return True
        for v, ns in self.adj.items():
            if v in self.taxa:
                continue
            want = 2 if v == self.root else 3
            if len(ns) != want:
                return False
        return True

    def is_discriminating(self) -> bool:
        if self.colors is None:
            return True
        for u, ns in self.adj.items():
            if u in self.taxa:
                continue
            for v in ns:
                if v not in self.taxa and self.colors[u] == self.colors[v]:
                    return False
        return True

    def __repr__(self):
        return f"Tree({canonical_form(self)!r})"


def _check_tree_shape(adj):
    n_edges = sum(len(ns) for ns in adj.values()) // 2
    if n_edges != len(adj) - 1:
        raise InputError("edge set does not form a tree")
    start = next(iter(adj))
    seen = {start}
    stack = [start]
    while stack:
        u = stack.pop()
        for v in adj[u]:
            if v not in seen:
                seen.add(v)
                stack.append(v)
    if len(seen) != len(adj):
        raise InputError("edge set is not connected")


def _check_taxa(names):
    seen = set()
    for name in names:
        if not isinstance(name, str) or not TAXON_RE.match(name):
            raise InputError(f"invalid taxon token {name!r}")
        if name in seen:
            raise DuplicateTaxon(f"duplicate taxon {name!r}", witness=name)
        seen.add(name)


# ---------------------------------------------------------------------------
# traversal helpers

def _bfs_parents(t: Tree, start) -> dict:
    parent = {start: None}
    queue = deque([start])
    adj = t.adj
    while queue:
        u = queue.popleft()
        for v in adj[u]:
            if v not in parent:
                parent[v] = u
                queue.append(v)
    return parent


def _check_vertex(t: Tree, v):
    if v not in t.adj:
        raise UnknownVertex(f"unknown vertex {v!r}", witness=v)


def path_between(t: Tree, u, v) -> list[tuple]:
    """Edges of the unique u-v path, in order from u to v."""
    _check_vertex(t, u)
    _check_vertex(t, v)
    if u == v:
        return []
    parent = _bfs_parents(t, v)
    out = []
    w = u
    while w != v:
        p = parent[w]
        out.append((w, p))
        w = p
    return out


def path_vertices(t: Tree, u, v) -> list:
    parent = _bfs_parents(t, v)
    out = [u]
    while out[-1] != v:
        out.append(parent[out[-1]])
    return out


def leaf_path_sums(t: Tree) -> dict[tuple[str, str], int]:
    """Label sum along the path between every ordered pair of distinct taxa."""
    adj, labels, taxa = t.adj, t.labels, t.taxa
    out = {}
    for src, a in taxa.items():
        acc = {src: 0}
        stack = [src]
        while stack:
            u = stack.pop()
            base = acc[u]
            for w in adj[u]:
                if w not in acc:
                    acc[w] = base + labels[frozenset((u, w))]
                    stack.append(w)
        for w, b in taxa.items():
            if w != src:
                out[a, b] = acc[w]
    return out


def median(t: Tree, x: str, y: str, z: str):
    """The unique vertex lying on all three paths between x, y and z."""
    vx, vy, vz = t.vertex_of(x), t.vertex_of(y), t.vertex_of(z)
    parent = _bfs_parents(t, vx)
    anc = set()
    w = vy
    while w is not None:
        anc.add(w)
        w = parent[w]
    w = vz
    while w not in anc:
        w = parent[w]
    return w


class _Rooted:
    """Parent/depth tables of a tree hung from a vertex (for repeated lca queries)."""

    __slots__ = ("parent", "depth")

    def __init__(self, t: Tree, top):
        self.parent = {top: None}
        self.depth = {top: 0}
        queue = deque([top])
        while queue:
            u = queue.popleft()
            for v in t.adj[u]:
                if v not in self.parent:
                    self.parent[v] = u
                    self.depth[v] = self.depth[u] + 1
                    queue.append(v)

    def lca(self, a, b):
        parent, depth = self.parent, self.depth
        while depth[a] > depth[b]:
            a = parent[a]
        while depth[b] > depth[a]:
            b = parent[b]
        while a != b:
            a, b = parent[a], parent[b]
        return a


def all_medians(t: Tree) -> dict[tuple[str, str, str], object]:
    """Median vertex of every sorted triple of taxa."""
    names = t.sorted_taxa()
    out = {}
    for i, x in enumerate(names):
        hung = _Rooted(t, t.vertex_of(x))
        for j in range(i + 1, len(names)):
            vy = t.vertex_of(names[j])
            for k in range(j + 1, len(names)):
                out[x, names[j], names[k]] = hung.lca(vy, t.vertex_of(names[k]))
    return out


def lca(t: Tree, s: Iterable[str]):
    """Least common ancestor of a non-empty taxa set in a rooted tree."""
    if t.root is None:
        raise NotRooted("lca needs a rooted tree")
    verts = [t.vertex_of(x) for x in s]
    if not verts:
        raise EmptySubset("lca of the empty set")
    hung = _Rooted(t, t.root)
    acc = verts[0]
    for v in verts[1:]:
        acc = hung.lca(acc, v)
    return acc


# ---------------------------------------------------------------------------
# restriction and contraction

def _suppress(adj: dict, labels: dict | None, v, keep_label_sum=True):
    a, b = adj[v]
    adj[a].discard(v)
    adj[b].discard(v)
    adj[a].add(b)
    adj[b].add(a)
    del adj[v]
    if labels is not None:
        labels[frozenset((a, b))] = labels.pop(frozenset((a, v))) + labels.pop(frozenset((v, b)))


def restrict_display(t: Tree, sub: Iterable[str]) -> Tree:
    """Tree displayed on ``sub``: delete other leaves, suppress degree-2 vertices.

    Suppressing a vertex merges its two edges into one whose label is the sum,
    so the label sum between any two kept taxa is unchanged.  For a rooted
    tree the new root is the lca of ``sub``.
    """
    sub = set(sub)
    if not sub:
        raise EmptySubset("cannot restrict to the empty set")
    keep = {t.vertex_of(x) for x in sub}
    if len(keep) == 1:
        (v,) = keep
        return Tree.single(t.taxa[v])
    adj = {v: set(ns) for v, ns in t.adj.items()}
    labels = dict(t.labels) if t.labels is not None else None
    # prune to the minimal subtree spanning the kept leaves
    stack = [v for v, ns in adj.items() if len(ns) == 1 and v not in keep]
    while stack:
        v = stack.pop()
        if v not in adj or len(adj[v]) != 1 or v in keep:
            continue
        (w,) = adj.pop(v)
        adj[w].discard(v)
        if labels is not None:
            del labels[frozenset((v, w))]
        if len(adj[w]) == 1 and w not in keep:
            stack.append(w)
    root = None
    if t.root is not None:
        root = lca(t, sub)
    for v in [v for v, ns in adj.items() if len(ns) == 2 and v not in keep and v != root]:
        _suppress(adj, labels, v)
    adj = {v: frozenset(ns) for v, ns in adj.items()}
    taxa = {v: t.taxa[v] for v in keep}
    colors = {v: c for v, c in t.colors.items() if v in adj} if t.colors is not None else None
    return Tree(adj, taxa, root, labels, colors)


def contract_edge(t: Tree, e) -> Tree:
    """Contract an interior edge; the first endpoint's id survives."""
    u, v = tuple(e) if not isinstance(e, tuple) else e
    _check_vertex(t, u)
    _check_vertex(t, v)
    if v not in t.adj[u]:
        raise UnknownVertex(f"{u!r}-{v!r} is not an edge")
    if u in t.taxa or v in t.taxa:
        raise TerminalEdge(f"{u!r}-{v!r} is a terminal edge", witness=(u, v))
    adj = {w: set(ns) for w, ns in t.adj.items()}
    labels = dict(t.labels) if t.labels is not None else None
    if labels is not None:
        del labels[frozenset((u, v))]
    adj[u].discard(v)
    for w in adj.pop(v):
        if w == u:
            continue
        adj[w].discard(v)
        adj[w].add(u)
        adj[u].add(w)
        if labels is not None:
            labels[frozenset((u, w))] = labels.pop(frozenset((v, w)))
    colors = None
    if t.colors is not None:
        colors = {w: c for w, c in t.colors.items() if w != v}
    root = u if t.root == v else t.root
    return Tree({w: frozenset(ns) for w, ns in adj.items()}, dict(t.taxa), root, labels, colors)


def contract_interior_zero_edges(t: Tree) -> Tree:
    while True:
        for e in t.interior_edges():
            if t.labels[e] == 0:
                t = contract_edge(t, tuple(e))
                break
        else:
            return t


# ---------------------------------------------------------------------------
# canonical form and text codec

def _top(t: Tree):
    if t.root is not None:
        return t.root
    leaf = t.vertex_of(min(t._vertex_of))
    return next(iter(t.adj[leaf]))


def _render(t: Tree, top) -> str:
    adj, taxa, labels, colors = t.adj, t.taxa, t.labels, t.colors
    parent = {top: None}
    order = [top]
    for u in order:
        for v in adj[u]:
            if v not in parent:
                parent[v] = u
                order.append(v)
    key = {}
    text = {}
    for u in reversed(order):
        kids = [v for v in adj[u] if parent.get(v) == u and v != parent[u]]
        if u in taxa:
            key[u] = taxa[u]
            body = taxa[u] if not kids else "(" + ",".join(text[k] for k in sorted(kids, key=key.get)) + ")" + taxa[u]
        else:
            kids.sort(key=key.get)
            key[u] = key[kids[0]] if kids else ""
            body = "(" + ",".join(text[k] for k in kids) + ")"
            if colors is not None:
                body += colors[u]
        p = parent[u]
        if p is not None and labels is not None:
            body += ":" + str(labels[frozenset((u, p))])
        text[u] = body
    return text[top]


def serialize_tree(t: Tree) -> str:
    """Deterministic text form: canonical rooting and child order, then ``;``."""
    header = "#rooted" if t.root is not None else "#unrooted"
    if len(t.adj) == 1:
        (v,) = t.adj
        return f"{header}\n{t.taxa[v]};\n"
    return f"{header}\n{_render(t, _top(t))};\n"


def canonical_form(t: Tree) -> str:
    """String equal for two trees iff they are isomorphic with taxa, labels and colors."""
    return serialize_tree(t).replace("\n", " ").strip()


_TOKEN = re.compile(r"\s*([A-Za-z0-9_.\-]+|[(),:;])")


def parse_tree(text: str) -> Tree:
    """Parse the tree text format (see README)."""
    rooted = False
    body_lines = []
    offset = 0
    header_seen = False
    for line in text.splitlines(keepends=True):
        stripped = line.strip()
        if stripped.startswith("#"):
            if not header_seen and not any(l.strip() for l in body_lines) and stripped in ("#rooted", "#unrooted"):
                rooted = stripped == "#rooted"
                header_seen = True
            body_lines.append(" " * len(line.rstrip("\n")) + ("\n" if line.endswith("\n") else ""))
        else:
            body_lines.append(line)
    body = "".join(body_lines)
    tokens = []
    pos = 0
    while pos < len(body):
        if body[pos].isspace():
            pos += 1
            continue
        m = _TOKEN.match(body, pos)
        if not m:
            raise TreeSyntaxError(f"unexpected character {body[pos]!r}", pos)
        tokens.append((m.group(1), m.start(1)))
        pos = m.end()
    parser = _Parser(tokens, len(body))
    return parser.parse(rooted)


class _Parser:
    def __init__(self, tokens, end):
        self.tokens = tokens
        self.i = 0
        self.end = end
        self.ids = count()
        self.adj: dict = {}
        self.labels: dict = {}
        self.names: dict = {}
        self.leaf_names: dict = {}

    def peek(self):
        return self.tokens[self.i][0] if self.i < len(self.tokens) else None

    def pos(self):
        return self.tokens[self.i][1] if self.i < len(self.tokens) else self.end

    def take(self, expected=None):
        tok = self.peek()
        if tok is None or (expected is not None and tok != expected):
            want = expected or "a token"
            raise TreeSyntaxError(f"expected {want!r}, found {tok!r}", self.pos())
        self.i += 1
        return tok

    def is_name(self, tok):
        return tok is not None and tok not in "(),:;"

    def node(self):
        v = next(self.ids)
        self.adj[v] = set()
        if self.peek() == "(":
            self.take("(")
            while True:
                child, lab = self.node()
                self.adj[v].add(child)
                self.adj[child].add(v)
                self.labels[frozenset((v, child))] = lab
                if self.peek() == ",":
                    self.take(",")
                    continue
                self.take(")")
                break
            if self.is_name(self.peek()):
                self.names[v] = self.take()
        else:
            tok = self.peek()
            if not self.is_name(tok):
                raise TreeSyntaxError(f"expected a taxon, found {tok!r}", self.pos())
            self.leaf_names[v] = self.take()
        lab = None
        if self.peek() == ":":
            self.take(":")
            at = self.pos()
            tok = self.take()
            if not tok.isdigit():
                raise TreeSyntaxError(f"edge label must be an integer, found {tok!r}", at)
            lab = int(tok)
            if lab not in (0, 1):
                raise BadLabel(f"edge label {lab} is not 0 or 1", witness=lab)
        return v, lab

    def parse(self, rooted):
        if self.peek() is None:
            raise TreeSyntaxError("empty input", 0)
        top, lab = self.node()
        if lab is not None:
            raise TreeSyntaxError("the outermost node cannot carry an edge label", self.pos())
        self.take(";")
        if self.peek() is not None:
            raise TreeSyntaxError("trailing input after ';'", self.pos())
        adj = {v: frozenset(ns) for v, ns in self.adj.items()}
        taxa = dict(self.leaf_names)
        colors = dict(self.names)
        if len(adj) == 1:
            if top not in taxa:
                raise TreeSyntaxError("a single-vertex tree must be a taxon", 0)
            return Tree(adj, taxa, None, {}, None)
        if len(adj[top]) == 1 and not rooted:
            if top not in colors:
                raise TreeSyntaxError("an outermost node of degree one must be named", 0)
            taxa[top] = colors.pop(top)
        elif rooted and len(adj[top]) == 1:
            raise TreeSyntaxError("a root needs at least two children", 0)
        _check_taxa(taxa.values())
        labs = list(self.labels.values())
        if all(x is None for x in labs):
            labels = None
        elif any(x is None for x in labs):
            raise BadLabel("either every edge or no edge carries a label")
        else:
            labels = dict(self.labels)
        inner = [v for v in adj if v not in taxa]
        if not colors:
            colors = None
        elif len(colors) != len(inner):
            raise TreeSyntaxError("either every interior node or none carries a color token", 0)
        return Tree(adj, taxa, top if rooted else None, labels, colors)
