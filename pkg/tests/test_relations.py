import warnings

import pytest

from phylorel import relations as rel
from phylorel.errors import (ClassInconsistency, Degree2Root, Disconnected, DuplicatePair,
                             InPointerConflict, InputError, InvalidRootChoice, MixedKindConflict,
                             NoCentralVertex, NotEquivalence, NotForest, TaxaMismatch,
                             TwoComponents, ZeroOneConflict)
from phylorel.oracles import brute_force_explainers, enumerate_phylo_trees
from phylorel.relations import (DIR, SYM, UNK, ZERO, Component, EventRelation, HUB,
                                admissible_rooted_trees, binary_count_formula, build_quotient,
                                central_vertices, derive_relation, enumerate_binary,
                                expand_classes, explains, format_relation, is_least_resolved,
                                minimally_resolved_component, minimally_resolved_forest,
                                parse_relation, prime, reconstruct)
from phylorel.tree import Tree, canonical_form, leaf_path_sums

from conftest import tree


def R(*records, taxa=()):
    return EventRelation.from_records(records, taxa)


def s3():
    # center v; x and z on 1-edges, y on a 0-edge
    return Tree.from_edges([("v", "x", 1), ("v", "y", 0), ("v", "z", 1)])


def vertex_count_minimum(r):
    return min(len(t.adj) for t in brute_force_explainers(r, allow_degree2=True))


class TestDerive:
    def test_s3(self):
        r = derive_relation(s3())
        assert r.sorted_records() == [("x", "y", SYM), ("y", "z", SYM)]
        assert r.kind("x", "z") is None

    def test_all_zero(self):
        t = s3().with_labels({e: 0 for e in s3().edges()})
        r = derive_relation(t)
        assert {k for *_, k in r.sorted_records()} == {ZERO}
        assert len(r.records) == 3

    def test_rooted_directions(self):
        t = Tree.from_edges([("r", "x", 1), ("r", "y", 0), ("r", "z", 1)], root="r")
        r = derive_relation(t, rel.DIRECTED)
        assert r.sorted_records() == [("y", "x", DIR), ("y", "z", DIR)]

    def test_symmetric_never_unknown(self):
        for topo in enumerate_phylo_trees("abcd"):
            from phylorel.oracles import enumerate_edge_labelings
            for t in enumerate_edge_labelings(topo):
                assert UNK not in {k for *_, k in derive_relation(t).sorted_records()}

    def test_unlabelled(self):
        with pytest.raises(InputError):
            derive_relation(Tree.from_edges([("v", "a"), ("v", "b"), ("v", "c")]))


class TestRecords:
    def test_zero_one_conflict(self):
        with pytest.raises(ZeroOneConflict):
            R(("a", "b", ZERO), ("b", "a", SYM))

    def test_duplicate(self):
        with pytest.raises(DuplicatePair):
            R(("a", "b", SYM), ("b", "a", SYM))

    def test_modes(self):
        assert R(("a", "b", ZERO)).mode == rel.SYMMETRIC
        assert R(("a", "b", DIR)).mode == rel.DIRECTED
        assert R(("a", "b", DIR), ("b", "c", UNK)).mode == rel.MIXED
        assert R(("a", "b", DIR), ("b", "c", SYM)).mode == rel.MIXED

    def test_round_trip_text(self):
        r = R(("b", "a", DIR), ("c", "d", ZERO), taxa=["e"])
        text = format_relation(r)
        assert text == "taxa\ta,b,c,d,e\nb\ta\tD\nc\td\tZ\n"
        assert parse_relation(text) == r

    def test_parse_errors(self):
        with pytest.raises(InputError):
            parse_relation("a\tb\tX\n")
        with pytest.raises(InputError):
            parse_relation("a b S\n")


class TestQuotient:
    def test_triangle(self):
        with pytest.raises(NotForest) as info:
            build_quotient(R(("a", "b", SYM), ("b", "c", SYM), ("a", "c", SYM)))
        assert info.value.witness == ("a", "b", "c")

    def test_class_inconsistency(self):
        with pytest.raises(ClassInconsistency):
            build_quotient(R(("a", "b", ZERO), ("a", "c", SYM)))

    def test_in_pointer(self):
        with pytest.raises(InPointerConflict):
            build_quotient(R(("x", "v", DIR), ("y", "v", DIR)))

    def test_not_equivalence(self):
        with pytest.raises(NotEquivalence) as info:
            build_quotient(R(("a", "b", ZERO), ("b", "c", ZERO)))
        assert set(info.value.witness) == {"a", "b", "c"}

    def test_mixed_kind(self):
        with pytest.raises(MixedKindConflict):
            build_quotient(R(("a", "b", ZERO), ("a", "c", DIR), ("c", "b", DIR)))

    def test_classes_and_components(self):
        g = build_quotient(R(("a", "b", ZERO), ("a", "c", SYM), ("b", "c", SYM), taxa="d"))
        assert g.classes == {"a": ("a", "b"), "c": ("c",), "d": ("d",)}
        assert [c.vertices for c in g.components] == [("a", "c"), ("d",)]
        assert not g.is_discrete() and not g.is_connected()


class TestComponent:
    def test_path(self):
        # the unique vertex-minimal explainer of a~1b~1c, frozen from brute force
        r = R(("a", "b", SYM), ("b", "c", SYM))
        found = brute_force_explainers(r)
        minimum = min(len(t.adj) for t in found)
        best = {canonical_form(t) for t in found if len(t.adj) == minimum}
        assert minimum == 4 and len(best) == 1
        t = minimally_resolved_component(build_quotient(r).components[0])
        assert best == {canonical_form(t)}
        c = prime("b")
        assert t.label("a", c) == 1 and t.label("c", c) == 1 and t.label("b", c) == 0

    def test_single_edge(self):
        t = minimally_resolved_component(build_quotient(R(("a", "b", SYM))).components[0])
        assert t.labels == {frozenset(("a", "b")): 1}

    def test_directed_path(self):
        r = R(("x1", "x2", DIR), ("x2", "x3", DIR))
        t = reconstruct(r)
        u1, u2 = prime("x1"), prime("x2")
        assert t.root == u1
        assert t.label(u1, "x1") == 0 and t.label(u1, u2) == 1
        assert t.label(u2, "x2") == 0 and t.label(u2, "x3") == 1
        assert explains(t, r)


class TestForest:
    def test_three_isolated(self):
        g = build_quotient(R(taxa="abc"))
        t = minimally_resolved_forest(g)
        assert set(t.adj[HUB]) == {"a", "b", "c"}
        assert set(t.labels.values()) == {1}
        assert derive_relation(t).records == {}

    def test_two_isolated(self):
        g = build_quotient(R(taxa="ab"))
        with pytest.warns(Degree2Root):
            t = minimally_resolved_forest(g)
        assert t.adj[HUB] == {"a", "b"} and set(t.labels.values()) == {1}

    def test_edge_plus_isolated(self):
        g = build_quotient(R(("v", "w", SYM), taxa="a"))
        with pytest.warns(Degree2Root):
            t = minimally_resolved_forest(g)
        x = prime("v")
        assert t.label(x, "v") == 0 and t.label(x, "w") == 1
        assert t.label(HUB, x) == 1 and t.label(HUB, "a") == 1
        sums = leaf_path_sums(t)
        assert sums["v", "w"] == 1 and sums["a", "v"] == 2
        assert derive_relation(t).sorted_records() == [("v", "w", SYM)]

    def test_bad_root_choice(self):
        g = build_quotient(R(("a", "b", DIR), ("c", "d", DIR)))
        with pytest.raises(InvalidRootChoice), warnings.catch_warnings():
            warnings.simplefilter("ignore", Degree2Root)
            minimally_resolved_forest(g, "b")


class TestExpand:
    def test_identity(self):
        t = s3()
        assert canonical_form(expand_classes(t, {x: (x,) for x in "xyz"})) == canonical_form(t)

    def test_zero_edge_representative(self):
        r = R(("a1", "a2", ZERO), ("a1", "b", SYM), ("a2", "b", SYM), ("b", "c", SYM))
        t = reconstruct(r)
        w = next(iter(t.adj["a1"]))
        assert t.adj["a2"] == {w}
        assert t.label(w, "a1") == 0 and t.label(w, "a2") == 0
        assert explains(t, r)

    def test_hub_representative(self):
        # three classes, the two-member one isolated: it needs its own hub
        r = R(("a1", "a2", ZERO), taxa="bc")
        t = reconstruct(r)
        h = ("h", "a1")
        assert t.adj["a1"] == {h} and t.adj["a2"] == {h}
        assert t.label(h, "a1") == 0 and t.label(h, "a2") == 0
        assert t.label(h, HUB) == 1
        assert derive_relation(t) == r
        assert len(t.adj) == vertex_count_minimum(r)


class TestExplains:
    def test_s3(self):
        r = R(("x", "y", SYM), ("y", "z", SYM))
        assert explains(s3(), r)
        assert not explains(s3(), R(("x", "y", SYM), ("y", "z", SYM), ("x", "z", SYM)))

    def test_taxa_mismatch(self):
        with pytest.raises(TaxaMismatch):
            explains(s3(), R(("x", "y", SYM)))


class TestLeastResolved:
    def test_algorithm_output(self):
        r = R(("a", "b", SYM), ("b", "c", SYM), ("c", "d", SYM), ("b", "e", SYM))
        t = reconstruct(r)
        assert is_least_resolved(t, r)
        assert is_least_resolved(t, r, structural=True)

    def test_interior_zero_edge(self):
        # caterpillar a,b | c,d with an interior 0-edge: it contracts to the star
        t = tree("((a:1,b:0)p:0,c:1,d:1)q;")
        r = derive_relation(t)
        assert not is_least_resolved(t, r)

    def test_single_edge(self):
        t = Tree.from_edges([("a", "b", 1)])
        assert is_least_resolved(t, derive_relation(t))

    def test_structural_disconnected(self):
        r = R(taxa="abc")
        with pytest.raises(Disconnected):
            is_least_resolved(reconstruct(r), r, structural=True)


class TestBinary:
    def test_empty_four(self):
        # frozen from brute force: all binary labelled trees on four taxa with no related pair
        from phylorel.oracles import all_labeled_trees
        r = R(taxa="abcd")
        brute = {canonical_form(t) for t in all_labeled_trees("abcd")
                 if t.is_binary() and explains(t, r)}
        assert len(brute) == 6
        out = enumerate_binary(r)
        assert {canonical_form(t) for t in out} == brute
        hub = reconstruct(r)
        assert binary_count_formula(hub) == 6

    def test_path_is_its_own_resolution(self):
        r = R(("a", "b", SYM), ("b", "c", SYM), ("c", "d", SYM))
        out = enumerate_binary(r)
        assert [canonical_form(t) for t in out] == [canonical_form(reconstruct(r))]

    def test_two_components(self):
        r = R(("a", "b", SYM), taxa="c")
        with pytest.warns(TwoComponents):
            assert enumerate_binary(r) == []
        with warnings.catch_warnings():
            warnings.simplefilter("error")
            out = enumerate_binary(r, allow_degree2_root=True)
        assert out and all(explains(t, rel.quotient_relation(build_quotient(r))) for t in out)


class TestCentral:
    def test_branching_component(self):
        # a <- b -> c <-> d -> e
        r = R(("b", "a", DIR), ("b", "c", DIR), ("c", "d", UNK), ("d", "e", DIR))
        comp = build_quotient(r).components[0]
        assert central_vertices(comp) == ["b"]

    def test_symmetric_path(self):
        comp = Component(("a", "b", "c"), (("a", "b", UNK), ("b", "c", UNK)))
        assert central_vertices(comp) == ["a", "b", "c"]

    def test_in_pointer(self):
        comp = Component(("v", "x", "y"), (("x", "v", DIR), ("y", "v", DIR)))
        assert central_vertices(comp) == []


class TestAdmissible:
    def test_branching_component(self):
        r = R(("b", "a", DIR), ("b", "c", DIR), ("c", "d", UNK), ("d", "e", DIR))
        found = admissible_rooted_trees(r)
        assert [(d.component, d.vertex) for d, _ in found] == [(0, "b")]
        (_, t), = found
        assert t.root == prime("b")
        assert explains(t, r)
        got = derive_relation(t, rel.DIRECTED)
        assert got.kind("c", "d") == DIR and got.records[frozenset("cd")][:2] == ("c", "d")

    def test_directed_input(self):
        r = R(("a", "b", DIR), ("b", "c", DIR), ("b", "d", DIR))
        found = admissible_rooted_trees(r)
        assert [d.vertex for d, _ in found] == ["a"]
        assert canonical_form(found[0][1]) == canonical_form(reconstruct(r))

    def test_one_directed_one_unknown(self):
        # x -> v and v <-> y: only roots keeping x -> v survive
        r = R(("x", "v", DIR), ("v", "y", UNK))
        found = admissible_rooted_trees(r)
        assert [d.vertex for d, _ in found] == ["x"]
        assert all(explains(t, r) for _, t in found)
        # frozen from brute force over three taxa: every rooted explainer has x -> v
        for t in brute_force_explainers(r):
            assert derive_relation(t, rel.DIRECTED).records[frozenset("vx")][:2] == ("x", "v")

    def test_no_center(self):
        r = R(("a", "b", UNK), ("c", "b", DIR), ("d", "c", DIR), ("a", "e", UNK), ("f", "e", DIR))
        with pytest.warns(NoCentralVertex):
            assert admissible_rooted_trees(r) == []

    def test_two_components(self):
        r = R(("a", "b", UNK), ("c", "d", DIR), taxa="e")
        found = admissible_rooted_trees(r)
        assert all(explains(t, r) for _, t in found)
        assert ("*", "hub") in {(d.component, d.vertex) for d, _ in found}
