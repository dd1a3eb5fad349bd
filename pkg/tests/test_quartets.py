import itertools
import random

import pytest

from phylorel.errors import AmbiguousPlacement, InputError, NoPlacement
from phylorel.oracles import enumerate_phylo_trees
from phylorel.quartets import (QuartetSystem, check_properties, displayed_quartets,
                               format_quartet, format_quartets, parse_quartets, quartet,
                               tree_from_quartets)
from phylorel.tree import canonical_form

from conftest import tree


def system(taxa, *qs):
    return QuartetSystem(frozenset(taxa), frozenset(quartet(*q) for q in qs))


TYPE1 = system("uwxyz", "xwyu", "xwzu", "xwyz", "uwyz", "xuyz")
TYPE2 = system("uwxyz", "ywzu", "xuyz", "xzuw", "xyzw", "xwyu")


class TestQuartet:
    def test_canonical(self):
        assert quartet("d", "c", "b", "a") == (("a", "b"), ("c", "d"))
        assert format_quartet(quartet("d", "c", "b", "a")) == "ab|cd"

    def test_repeat(self):
        with pytest.raises(InputError):
            quartet("a", "a", "b", "c")


class TestDisplayed:
    def test_star(self):
        assert len(displayed_quartets(tree("(a,b,c,d,e);"))) == 0

    def test_quartet_tree(self):
        assert displayed_quartets(tree("((a,b),c,d);")) == system("abcd", "abcd")

    def test_caterpillar(self):
        assert displayed_quartets(tree("((x,w),u,(y,z));")) == TYPE1


class TestProperties:
    def test_displayed(self):
        for topo in enumerate_phylo_trees("abcdef"):
            rep = check_properties(displayed_quartets(topo))
            assert rep.thin and rep.transitive and rep.saturated
            assert rep.complete == topo.is_binary()

    def test_type2(self):
        rep = check_properties(TYPE2)
        assert rep.complete and rep.thin and rep.transitive
        assert not rep.saturated

    def test_not_thin(self):
        rep = check_properties(system("abcd", "abcd", "acbd"))
        assert not rep.thin
        assert set(rep.witnesses["thin"]) == {quartet("a", "b", "c", "d"),
                                              quartet("a", "c", "b", "d")}


class TestRebuild:
    def test_single_quartet(self):
        t = tree_from_quartets(system("abcd", "abcd"))
        assert canonical_form(t) == canonical_form(tree("((a,b),c,d);"))

    def test_empty(self):
        t = tree_from_quartets(system("abcdef"))
        assert canonical_form(t) == canonical_form(tree("(a,b,c,d,e,f);"))

    def test_type1(self):
        t = tree_from_quartets(TYPE1)
        assert canonical_form(t) == canonical_form(tree("((x,w),u,(y,z));"))

    def test_type2_fails(self):
        with pytest.raises((NoPlacement, AmbiguousPlacement)):
            tree_from_quartets(TYPE2)

    def test_round_trip_any_order(self):
        rng = random.Random(3)
        for topo in enumerate_phylo_trees("abcdef"):
            order = list("abcdef")
            rng.shuffle(order)
            t = tree_from_quartets(displayed_quartets(topo), order)
            assert canonical_form(t) == canonical_form(topo)


class TestFormat:
    def test_round_trip(self):
        text = format_quartets(TYPE1)
        assert text.splitlines()[0] == "taxa\tu,w,x,y,z"
        assert parse_quartets(text) == TYPE1

    def test_bad_line(self):
        with pytest.raises(InputError):
            parse_quartets("a\tb\tc\td\n")

    def test_taxa_line_adds_isolated(self):
        q = parse_quartets("taxa\te\na\tb\t|\tc\td\n")
        assert q.taxa == frozenset("abcde")


def test_five_taxon_systems_with_trees():
    # every thin, transitive, saturated system on five taxa comes from a tree
    quads = list(itertools.combinations("abcde", 4))
    trees = {displayed_quartets(t) for t in enumerate_phylo_trees("abcde")}
    count = 0
    for choice in itertools.product(range(4), repeat=len(quads)):
        qs = set()
        for quad, c in zip(quads, choice):
            if c:
                a, b, x, y = quad
                qs.add([quartet(a, b, x, y), quartet(a, x, b, y), quartet(a, y, b, x)][c - 1])
        q = QuartetSystem(frozenset("abcde"), frozenset(qs))
        rep = check_properties(q)
        if rep.thin and rep.transitive and rep.saturated:
            count += 1
            assert q in trees
    assert count == len(trees) == 26
