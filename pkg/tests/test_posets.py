"""Poset core: construction, validation, chains, extensions."""

import itertools
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from markedposets import (
    MarkedPoset,
    Poset,
    augment_marked_order,
    canonical_labeling,
    hasse_components,
    linear_extensions,
    maximal_marked_chains,
    transitive_relation,
    validate_marked,
)


def brute_closure(elements, covers):
    """Independent transitive closure by fixpoint over pairs."""
    rel = {(p, p) for p in elements} | set(covers)
    changed = True
    while changed:
        changed = False
        for (a, b), (c, d) in itertools.product(list(rel), list(rel)):
            if b == c and (a, d) not in rel:
                rel.add((a, d))
                changed = True
    return rel


@st.composite
def small_posets(draw):
    n = draw(st.integers(min_value=1, max_value=6))
    names = [f"v{i}" for i in range(n)]
    perm = draw(st.permutations(names))
    edges = []
    for i in range(n):
        for j in range(i + 1, n):
            if draw(st.booleans()):
                edges.append((perm[i], perm[j]))
    return Poset.from_relations(names, edges)


class TestPoset:
    def test_rejects_cycle(self):
        with pytest.raises(ValueError, match="cycle"):
            Poset(["a", "b"], [("a", "b"), ("b", "a")])

    def test_rejects_redundant_cover(self):
        with pytest.raises(ValueError, match="implied"):
            Poset(["a", "b", "c"], [("a", "b"), ("b", "c"), ("a", "c")])

    def test_rejects_duplicate_ids(self):
        with pytest.raises(ValueError, match="duplicate"):
            Poset(["a", "a"], [])

    def test_from_relations_reduces(self):
        p = Poset.from_relations(["a", "b", "c"], [("a", "b"), ("b", "c"), ("a", "c")])
        assert sorted(p.covers) == [("a", "b"), ("b", "c")]

    def test_transitive_relation_chain(self):
        p = Poset(["a", "x", "b"], [("a", "x"), ("x", "b")])
        assert transitive_relation(p, "a", "b")
        assert not transitive_relation(p, "b", "a")

    def test_transitive_relation_antichain(self):
        p = Poset(["x", "y"], [])
        assert not transitive_relation(p, "x", "y")
        assert transitive_relation(p, "x", "x")

    def test_unknown_element(self):
        p = Poset(["x"], [])
        with pytest.raises(KeyError):
            transitive_relation(p, "x", "zz")

    @settings(max_examples=60, deadline=None)
    @given(small_posets())
    def test_partial_order_laws(self, poset):
        oracle = brute_closure(poset.elements, poset.covers)
        for p in poset.elements:
            assert poset.leq(p, p)
            for q in poset.elements:
                assert poset.leq(p, q) == ((p, q) in oracle)
                if p != q and poset.leq(p, q):
                    assert not poset.leq(q, p)
                for r in poset.elements:
                    if poset.leq(p, q) and poset.leq(q, r):
                        assert poset.leq(p, r)


class TestMarkedPoset:
    def test_requires_marked_extremes(self):
        with pytest.raises(ValueError, match="must be marked"):
            MarkedPoset(Poset(["a", "x"], [("a", "x")]), {"a": 0})

    def test_requires_order_preserving_marks(self):
        p = Poset(["a", "b"], [("a", "b")])
        with pytest.raises(ValueError, match="order-preserving"):
            MarkedPoset(p, {"a": 1, "b": 0})

    def test_validate_single_chain(self, segment):
        report = validate_marked(segment)
        assert report.strict and report.regular and not report.violations

    def test_validate_regularity_witness(self):
        # a(0) and m(1) both below marked y(2): the (m, a) pair breaks regularity
        p = Poset(["a", "m", "y"], [("a", "y"), ("m", "y")])
        report = validate_marked(MarkedPoset(p, {"a": 0, "m": 1, "y": 2}))
        assert report.strict
        assert not report.regular
        assert ("regular", ("a", "y"), "m", "a") in report.violations

    def test_validate_strictness(self):
        p = Poset(["a", "b"], [("a", "b")])
        report = validate_marked(MarkedPoset(p, {"a": 1, "b": 1}))
        assert not report.strict
        assert ("strict", "a", "b") in report.violations


class TestHasseComponents:
    def test_two_chains(self):
        p = Poset(["a", "x", "b", "c", "y", "d"],
                  [("a", "x"), ("x", "b"), ("c", "y"), ("y", "d")])
        mp = MarkedPoset(p, {"a": 0, "b": 1, "c": 0, "d": 1})
        assert hasse_components(mp) == [("a", "b", "x"), ("c", "d", "y")]

    def test_diamond_connected(self, diamond_02):
        assert hasse_components(diamond_02) == [("bot", "top", "x", "y")]

    def test_single_point(self):
        mp = MarkedPoset(Poset(["a"], []), {"a": 5})
        assert hasse_components(mp) == [("a",)]


class TestMaximalMarkedChains:
    def test_figure_one(self, figure_one):
        assert maximal_marked_chains(figure_one) == [
            ("bot", ("x1",), "right"),
            ("bot", ("x1", "x2"), "top"),
            ("left", ("x2",), "top"),
        ]

    def test_single_chain(self, segment):
        assert maximal_marked_chains(segment) == [("a", ("x",), "b")]

    def test_marked_cover_is_empty_chain(self):
        mp = MarkedPoset(Poset(["a", "b"], [("a", "b")]), {"a": 0, "b": 1})
        assert maximal_marked_chains(mp) == [("a", (), "b")]


class TestAugment:
    def test_incomparable_marked_get_ordered(self):
        mp = MarkedPoset(Poset(["a", "b"], []), {"a": 0, "b": 1})
        assert augment_marked_order(mp).covers == (("a", "b"),)

    def test_comparable_marked_unchanged(self):
        p = Poset(["a", "b"], [("a", "b")])
        mp = MarkedPoset(p, {"a": 0, "b": 1})
        assert augment_marked_order(mp) == p

    def test_three_marks_totally_ordered(self):
        mp = MarkedPoset(Poset(["a", "b", "c"], []), {"a": 0, "b": 1, "c": 2})
        aug = augment_marked_order(mp)
        assert sorted(aug.covers) == [("a", "b"), ("b", "c")]

    def test_idempotent(self, figure_one):
        once = augment_marked_order(figure_one)
        again = augment_marked_order(MarkedPoset(once, figure_one.marking))
        assert once == again


class TestLinearExtensions:
    def test_diamond_descents(self):
        p = Poset(["a", "x", "y", "b"], [("a", "x"), ("a", "y"), ("x", "b"), ("y", "b")])
        labeling = {"a": 1, "x": 2, "y": 3, "b": 4}
        words = list(linear_extensions(p, labeling))
        assert [w.word for w in words] == [("a", "x", "y", "b"), ("a", "y", "x", "b")]
        assert words[0].descents == 0
        assert words[1].descents == 1
        assert words[1].descent_prefix == (0, 0, 1, 1)

    def test_chain_unique(self):
        p = Poset(["a", "b", "c", "d"], [("a", "b"), ("b", "c"), ("c", "d")])
        words = list(linear_extensions(p))
        assert len(words) == 1
        assert words[0].descents == 0

    def test_antichain_counts_factorial(self):
        for n in range(1, 6):
            p = Poset([f"v{i}" for i in range(n)], [])
            assert sum(1 for _ in linear_extensions(p)) == __import__("math").factorial(n)

    def test_rejects_non_natural_labeling(self):
        p = Poset(["a", "b"], [("a", "b")])
        with pytest.raises(ValueError, match="order-preserving"):
            list(linear_extensions(p, {"a": 2, "b": 1}))

    @settings(max_examples=30, deadline=None)
    @given(small_posets())
    def test_matches_brute_force(self, poset):
        words = {w.word for w in linear_extensions(poset)}
        brute = {
            perm
            for perm in itertools.permutations(poset.elements)
            if all(not poset.less(perm[j], perm[i])
                   for i in range(len(perm)) for j in range(i + 1, len(perm)))
        }
        assert words == brute

    def test_labeling_changes_descents_not_words(self):
        p = Poset(["a", "x", "y", "b"], [("a", "x"), ("a", "y"), ("x", "b"), ("y", "b")])
        base = {w.word for w in linear_extensions(p)}
        other = {w.word for w in linear_extensions(p, {"a": 1, "y": 2, "x": 3, "b": 4})}
        assert base == other

    def test_descent_prefix_consistency(self):
        rng = random.Random(3)
        for _ in range(20):
            n = rng.randint(2, 6)
            names = [f"v{i}" for i in range(n)]
            order = names[:]
            rng.shuffle(order)
            edges = [(order[i], order[j]) for i in range(n) for j in range(i + 1, n)
                     if rng.random() < 0.4]
            poset = Poset.from_relations(names, edges)
            labeling = canonical_labeling(poset)
            for w in linear_extensions(poset):
                assert w.descent_prefix[0] == 0
                for i in range(1, n):
                    step = w.descent_prefix[i] - w.descent_prefix[i - 1]
                    assert step == (1 if labeling[w.word[i - 1]] > labeling[w.word[i]] else 0)
