"""Symbolic ternary metrics: the color of the median of every three taxa.

Covers the 4-set/5-set axioms, the K5 classification, quartet generation,
the m-equivalence classes (pseudo-cherries) and bottom-up reconstruction of
the discriminating dated tree.
"""
from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass, field
from enum import Enum

from .errors import (Condition3Violation, ConflictingTriple, InputError, MissingTriple,
                     NoPseudoCherry, NonDiscriminating, NotRealizable, NotTransitive,
                     QuartetConflict, TooFewTaxa, UnknownTaxon)
from .tree import TAXON_RE, Tree, all_medians

TOKEN_CHECK = TAXON_RE


@dataclass(frozen=True)
class TernaryMap:
    """Total map from sorted taxa triples to color tokens."""
    taxa: tuple
    values: dict = field(hash=False, compare=True)

    @classmethod
    def from_triples(cls, triples, taxa=()) -> "TernaryMap":
        names = set(taxa)
        values: dict = {}
        for x, y, z, color in triples:
            key = tuple(sorted((x, y, z)))
            if len(set(key)) != 3:
                raise InputError(f"triple {x},{y},{z} repeats a taxon")
            if key in values and values[key] != color:
                raise ConflictingTriple(f"{','.join(key)} has colors {values[key]} and {color}",
                                        witness=key)
            values[key] = color
            names.update(key)
        names = tuple(sorted(names))
        if len(names) < 3:
            raise TooFewTaxa("a ternary map needs at least three taxa")
        missing = [k for k in itertools.combinations(names, 3) if k not in values]
        if missing:
            shown = "; ".join(",".join(k) for k in missing[:10])
            more = f" (+{len(missing) - 10} more)" if len(missing) > 10 else ""
            raise MissingTriple(f"missing triples: {shown}{more}", witness=missing)
        return cls(names, values)

    def __call__(self, x, y, z):
        return self.values[tuple(sorted((x, y, z)))]

    def restrict(self, sub) -> "TernaryMap":
        sub = tuple(sorted(sub))
        return TernaryMap(sub, {k: self.values[k] for k in itertools.combinations(sub, 3)})


def derive_ternary(t: Tree) -> TernaryMap:
    """Color of the median of every triple of taxa."""
    if len(t.taxa) < 3:
        raise TooFewTaxa("need at least three taxa")
    if t.colors is None:
        raise InputError("tree carries no vertex colors")
    meds = all_medians(t)
    return TernaryMap(tuple(t.sorted_taxa()), {k: t.colors[v] for k, v in meds.items()})


# ---------------------------------------------------------------------------
# axioms

@dataclass(frozen=True)
class PartitionSignature:
    counts: tuple          # ((color, count), ...) sorted by color

    @property
    def shape(self) -> str:
        """Counts in ascending order joined by '-', e.g. ``2-2`` or ``4-6``."""
        return "-".join(str(c) for c in sorted(c for _, c in self.counts))

    def n_values(self) -> int:
        return len(self.counts)


def partition_signature(d: TernaryMap, s) -> PartitionSignature:
    s = sorted(s)
    known = set(d.taxa)
    for x in s:
        if x not in known:
            raise UnknownTaxon(f"unknown taxon {x!r}", witness=x)
    if len(s) < 3:
        raise InputError("a signature needs at least three taxa")
    c = Counter(d.values[k] for k in itertools.combinations(s, 3))
    return PartitionSignature(tuple(sorted(c.items())))


def _condition3_ok(sig: PartitionSignature) -> bool:
    return sig.n_values() == 1 or sig.shape == "2-2"


@dataclass
class Violation:
    condition: int
    witness: tuple
    signature: PartitionSignature

    def line(self) -> str:
        return f"CONDITION{self.condition} {','.join(self.witness)} {self.signature.shape}"


@dataclass
class MetricReport:
    violations: list

    @property
    def valid(self) -> bool:
        return not self.violations

    def lines(self) -> list[str]:
        if self.valid:
            return ["OK"]
        return sorted(v.line() for v in self.violations)


def check_metric(d: TernaryMap) -> MetricReport:
    """Every 4-set violating the two-value 2-2 rule and every 5-5 partitioned 5-set."""
    out = []
    for s in itertools.combinations(d.taxa, 4):
        sig = partition_signature(d, s)
        if not _condition3_ok(sig):
            out.append(Violation(3, s, sig))
    for s in itertools.combinations(d.taxa, 5):
        sig = partition_signature(d, s)
        if sig.shape == "5-5":
            out.append(Violation(4, s, sig))
    return MetricReport(out)


class K5Type(Enum):
    TYPE1 = 1
    TYPE2 = 2
    TYPE3 = 3
    TYPE4 = 4
    TYPE5 = 5


_K5_SHAPES = {(3, 3, 4): K5Type.TYPE1, (5, 5): K5Type.TYPE2, (4, 6): K5Type.TYPE3,
              (3, 7): K5Type.TYPE4, (10,): K5Type.TYPE5}


def k5_coloring(d: TernaryMap, s) -> dict:
    """Edge {a, b} of the complete graph on ``s`` gets the color of the other three."""
    s = tuple(sorted(s))
    return {frozenset((a, b)): d(*[x for x in s if x not in (a, b)])
            for a, b in itertools.combinations(s, 2)}


def classify_k5(d: TernaryMap, s) -> K5Type:
    s = tuple(sorted(s))
    if len(s) != 5 or len(set(s)) != 5:
        raise InputError("classify_k5 needs five distinct taxa")
    for sub in itertools.combinations(s, 4):
        sig = partition_signature(d, sub)
        if not _condition3_ok(sig):
            raise Condition3Violation(f"{','.join(sub)} is {sig.shape} partitioned",
                                      witness=sub)
    sizes = tuple(sorted(Counter(k5_coloring(d, s).values()).values()))
    return _K5_SHAPES[sizes]


def resolves(d: TernaryMap, quad, e) -> tuple | None:
    """Quartet xy|zu if e resolves the constant 4-set ``quad`` as xy|zu, else None.

    The pattern: d(x,y,e) = d(z,u,e) = A, the value on the 4-set, while the
    other four triples containing e share one value B != A.
    """
    a = d(*quad[:3])
    x = quad[0]
    for y in quad[1:]:
        z, u = [w for w in quad[1:] if w != y]
        if d(x, y, e) != a or d(z, u, e) != a:
            continue
        others = {d(x, z, e), d(x, u, e), d(y, z, e), d(y, u, e)}
        if len(others) == 1 and a not in others:
            return _quartet((x, y), (z, u))
    return None


def _quartet(p, q):
    p, q = tuple(sorted(p)), tuple(sorted(q))
    return (p, q) if p < q else (q, p)


@dataclass
class ResolutionReport:
    fully_resolved: bool
    unresolved: list


def is_fully_resolved(d: TernaryMap) -> ResolutionReport:
    """Every constant 4-set has a fifth taxon making the 5-set 4-6 partitioned."""
    bad = []
    for quad in itertools.combinations(d.taxa, 4):
        if partition_signature(d, quad).n_values() != 1:
            continue
        if not any(partition_signature(d, quad + (e,)).shape == "4-6"
                   for e in d.taxa if e not in quad):
            bad.append(quad)
    return ResolutionReport(not bad, bad)


def generate_quartets(d: TernaryMap):
    """Quartets generated by a ternary map (2-2 sets and resolved constant sets)."""
    from .quartets import QuartetSystem
    out = set()
    for quad in itertools.combinations(d.taxa, 4):
        sig = partition_signature(d, quad)
        if sig.shape == "2-2":
            x = quad[0]
            for y in quad[1:]:
                z, u = [w for w in quad[1:] if w != y]
                if d(x, y, z) == d(x, y, u):
                    out.add(_quartet((x, y), (z, u)))
                    break
        elif sig.n_values() == 1:
            found = {}
            for e in d.taxa:
                if e in quad:
                    continue
                q = resolves(d, quad, e)
                if q is not None:
                    found.setdefault(q, e)
            if len(found) > 1:
                (q1, e1), (q2, e2) = sorted(found.items())[:2]
                raise QuartetConflict(f"{','.join(quad)} is resolved as {_fmt(q1)} by {e1} "
                                      f"and as {_fmt(q2)} by {e2}", witness=(quad, e1, e2))
            out.update(found)
    return QuartetSystem(frozenset(d.taxa), frozenset(out))


def _fmt(q):
    return f"{q[0][0]}{q[0][1]}|{q[1][0]}{q[1][1]}" if all(len(x) == 1 for p in q for x in p) \
        else f"{','.join(q[0])}|{','.join(q[1])}"


# ---------------------------------------------------------------------------
# equivalence classes and reconstruction

def _equivalent_colors(names, delta, x, y) -> set:
    """Colors m for which x and y are m-equivalent."""
    rest = [w for w in names if w != x and w != y]
    cands = {delta(x, y, z) for z in rest}
    good = set()
    pairs = list(itertools.combinations(rest, 2))
    for m in cands:
        if all((delta(x, u, v) == m) == (delta(y, u, v) == m) for u, v in pairs):
            good.add(m)
    return good


def _classes(names, delta):
    """Equivalence classes (with their color) of the m-equivalence on ``names``."""
    names = list(names)
    color = {}
    nb = {x: set() for x in names}
    for x, y in itertools.combinations(names, 2):
        ms = _equivalent_colors(names, delta, x, y)
        if len(ms) > 1:
            raise NotTransitive(f"{x},{y} are equivalent for several colors {sorted(ms)}",
                                witness=(x, y))
        if ms:
            (m,) = ms
            color[frozenset((x, y))] = m
            nb[x].add(y)
            nb[y].add(x)
    seen = set()
    out = []
    for x in names:
        if x in seen:
            continue
        comp = [x]
        seen.add(x)
        for u in comp:
            for w in nb[u]:
                if w not in seen:
                    seen.add(w)
                    comp.append(w)
        comp.sort(key=_sort_key)
        ms = set()
        for a, b in itertools.combinations(comp, 2):
            key = frozenset((a, b))
            if key not in color:
                mid = next(w for w in comp if a in nb[w] and w in nb[b]) \
                    if any(a in nb[w] and w in nb[b] for w in comp) else comp[0]
                raise NotTransitive(f"{a} and {b} are each equivalent to {mid} "
                                    f"but not to each other", witness=(a, mid, b))
            ms.add(color[key])
        if len(ms) > 1:
            raise NotTransitive(f"class {comp} mixes colors {sorted(ms)}", witness=tuple(comp))
        out.append((tuple(comp), ms.pop() if ms else None))
    return out


def _sort_key(x):
    return (0, x, ()) if isinstance(x, str) else (1, x[1], x)


def equivalence_classes(d: TernaryMap) -> list[tuple[tuple, object]]:
    """Classes of the m-equivalence, each with its color (None for singletons)."""
    return _classes(d.taxa, d)


def pseudo_cherries(t: Tree) -> set[frozenset]:
    """Sets of at least two leaves sharing their neighbor."""
    out = set()
    for v in t.inner_vertices():
        leaves = frozenset(t.taxa[w] for w in t.adj[v] if w in t.taxa)
        if len(leaves) >= 2:
            out.add(leaves)
    return out


def reconstruct(d: TernaryMap) -> Tree:
    """The discriminating dated tree whose ternary map is ``d``.

    Bottom-up: all non-trivial equivalence classes of the current taxa are
    collapsed at once into super-taxa (represented by their smallest original
    member) until one class covers everything or two items remain.  On the way
    back down, a super-taxon becomes a new vertex of its class color, except
    that its members join the neighbor directly when that neighbor already
    carries the same color.  The result is re-derived and compared with ``d``.
    """
    if len(d.taxa) < 3:
        raise TooFewTaxa("need at least three taxa")
    rep = {x: x for x in d.taxa}
    items = list(d.taxa)
    history = []          # per round: {super id: (color, members)}
    base = None
    round_no = 0
    while True:
        def delta(a, b, c):
            return d(rep[a], rep[b], rep[c])
        if len(items) == 2:
            base = ("edge", None)
            break
        classes = _classes(items, delta)
        if len(classes) == 1:
            base = ("star", classes[0][1])
            break
        nontrivial = [(c, m) for c, m in classes if len(c) >= 2]
        if not nontrivial:
            raise NoPseudoCherry(f"no two of {len(items)} taxa are equivalent",
                                 witness=tuple(map(str, items)))
        step = {}
        new_items = [x for c, _ in classes if len(c) == 1 for x in c]
        for i, (c, m) in enumerate(nontrivial):
            sid = ("s", round_no, i)
            step[sid] = (m, c)
            rep[sid] = min(rep[x] for x in c)
            new_items.append(sid)
        history.append(step)
        items = new_items
        round_no += 1

    adj: dict = {}
    colors: dict = {}

    def link(a, b):
        adj.setdefault(a, set()).add(b)
        adj.setdefault(b, set()).add(a)

    if base[0] == "star":
        hub = ("s", "top")
        colors[hub] = base[1]
        for x in items:
            link(hub, x)
    else:
        link(items[0], items[1])

    for step in reversed(history):
        for sid, (m, members) in step.items():
            (w,) = adj[sid]
            if w in colors and colors[w] == m:
                adj[w].discard(sid)
                del adj[sid]
                for x in members:
                    link(w, x)
            else:
                colors[sid] = m
                for x in members:
                    link(sid, x)

    taxa = {v: v for v in adj if isinstance(v, str)}
    result = Tree({v: frozenset(ns) for v, ns in adj.items()}, taxa, None, None, colors)
    for u, ns in result.adj.items():
        if u in colors:
            for v in ns:
                if v in colors and colors[u] == colors[v]:
                    raise NonDiscriminating("adjacent interior vertices share color "
                                            f"{colors[u]}", witness=colors[u])
    if not result.is_phylogenetic():
        raise NotRealizable("reconstruction left a vertex of degree two")
    back = derive_ternary(result)
    if back.values != d.values:
        bad = next(k for k in sorted(d.values) if back.values[k] != d.values[k])
        raise NotRealizable(f"no dated tree realizes the map; e.g. {','.join(bad)}",
                            witness=bad)
    return result


# ---------------------------------------------------------------------------
# text format

def parse_ternary(text: str) -> TernaryMap:
    taxa = []
    triples = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = raw.rstrip("\r\n").split("\t")
        if parts[0] == "taxa":
            taxa.extend(x for p in parts[1:] for x in p.split(",") if x)
            continue
        if len(parts) != 4:
            raise InputError(f"line {lineno}: expected 'x<TAB>y<TAB>z<TAB>color'")
        for tok in parts:
            if not TOKEN_CHECK.match(tok):
                raise InputError(f"line {lineno}: invalid token {tok!r}")
        triples.append(tuple(parts))
    for x in taxa:
        if not TOKEN_CHECK.match(x):
            raise InputError(f"invalid taxon {x!r}")
    return TernaryMap.from_triples(triples, taxa)


def format_ternary(d: TernaryMap) -> str:
    lines = ["taxa\t" + ",".join(d.taxa)]
    lines += ["\t".join(k) + "\t" + d.values[k] for k in sorted(d.values)]
    return "\n".join(lines) + "\n"
