"""Ehrhart polynomials: the counting oracle, the extension formula, the family."""

import random
from fractions import Fraction

import pytest

from markedposets import (
    HRepresentation,
    LinearInequality,
    MarkedPoset,
    NonIntegralVertices,
    Poset,
    PreconditionViolated,
    build_chain_hrep,
    build_chain_order_hrep,
    build_order_hrep,
    count_restricted_extensions,
    ehrhart_by_counting,
    ehrhart_formula_marked_order,
    pm_closed_form,
    pm_family,
    polynomial,
    restricted_linear_extensions,
)
from markedposets.corpus import all_chain_order_partitions, random_marked_poset
from markedposets.posets import augment_marked_order


def random_natural_labeling(rng, poset):
    indeg = {e: len(poset.lower_covers(e)) for e in poset.elements}
    avail = [e for e in poset.elements if indeg[e] == 0]
    labeling = {}
    i = 1
    while avail:
        e = avail.pop(rng.randrange(len(avail)))
        labeling[e] = i
        i += 1
        for q in poset.upper_covers(e):
            indeg[q] -= 1
            if indeg[q] == 0:
                avail.append(q)
    return labeling


class TestCounting:
    def test_segment(self, segment):
        assert ehrhart_by_counting(build_order_hrep(segment)) == polynomial([1, 1])

    def test_dilated_square(self, diamond_02):
        # order polytope [0,2]^2 counts (2n+1)^2
        assert ehrhart_by_counting(build_order_hrep(diamond_02)) == polynomial([1, 4, 4])

    def test_figure_one_chain_polytope_is_unit_square(self, figure_one):
        assert ehrhart_by_counting(build_chain_hrep(figure_one)) == polynomial([1, 2, 1])

    def test_non_integral_vertices_refused(self):
        h = HRepresentation(
            ["x"], [LinearInequality({"x": -1}, 0), LinearInequality({"x": 2}, 1)])
        with pytest.raises(NonIntegralVertices):
            ehrhart_by_counting(h)


class TestFormula:
    def test_segment(self, segment):
        assert ehrhart_formula_marked_order(segment) == polynomial([1, 1])

    def test_pm3_is_cube_count(self):
        assert ehrhart_formula_marked_order(pm_family(3, 1)) == polynomial([1, 3, 3, 1])

    def test_diamond_descent_split(self, diamond_02):
        # two extensions: C(2n+2, 2) + C(2n+1, 2) = (2n+1)^2
        assert ehrhart_formula_marked_order(diamond_02) == polynomial([1, 4, 4])
        assert ehrhart_formula_marked_order(diamond_02) == ehrhart_by_counting(
            build_order_hrep(diamond_02))

    def test_requires_strict_regular(self):
        p = Poset(["a", "b"], [("a", "b")])
        with pytest.raises(PreconditionViolated):
            ehrhart_formula_marked_order(MarkedPoset(p, {"a": 0, "b": 0}))

    def test_requires_integral_marking(self, segment):
        mp = MarkedPoset(segment.poset, {"a": 0, "b": Fraction(3, 2)})
        with pytest.raises(PreconditionViolated):
            ehrhart_formula_marked_order(mp)

    def test_equal_marks_on_incomparable_marked_elements(self):
        p = Poset(["a", "b", "t", "x", "y"],
                  [("a", "x"), ("b", "y"), ("x", "t"), ("y", "t")])
        mp = MarkedPoset(p, {"a": 0, "b": 0, "t": 2})
        formula = ehrhart_formula_marked_order(mp)
        assert formula == ehrhart_by_counting(build_order_hrep(mp))

    def test_matches_counting_on_corpus(self):
        rng = random.Random(51)
        for trial in range(40):
            mp = random_marked_poset(rng, max_unmarked=6,
                                     min_unmarked=6 if trial < 6 else 1)
            assert ehrhart_formula_marked_order(mp) == ehrhart_by_counting(
                build_order_hrep(mp))

    def test_labeling_independence(self):
        rng = random.Random(52)
        for _ in range(12):
            mp = random_marked_poset(rng, max_unmarked=5)
            base = ehrhart_formula_marked_order(mp)
            augmented = augment_marked_order(mp)
            for _ in range(3):
                labeling = random_natural_labeling(rng, augmented)
                assert ehrhart_formula_marked_order(mp, labeling=labeling) == base

    def test_degree_and_constant_term(self):
        rng = random.Random(53)
        for _ in range(15):
            mp = random_marked_poset(rng, max_unmarked=4)
            poly = ehrhart_formula_marked_order(mp)
            assert poly.coefficients[0] == 1
            from markedposets import affine_dimension, enumerate_vertices
            dim = affine_dimension(enumerate_vertices(build_order_hrep(mp)))
            assert poly.degree == dim


class TestFamilyEquality:
    def test_order_equals_chain_on_corpus(self):
        rng = random.Random(54)
        for _ in range(30):
            mp = random_marked_poset(rng, max_unmarked=5)
            assert (ehrhart_by_counting(build_order_hrep(mp))
                    == ehrhart_by_counting(build_chain_hrep(mp)))

    def test_all_partitions_share_one_polynomial(self):
        rng = random.Random(55)
        for _ in range(10):
            mp = random_marked_poset(rng, max_unmarked=4)
            base = ehrhart_by_counting(build_order_hrep(mp))
            for part in all_chain_order_partitions(mp):
                h = build_chain_order_hrep(mp, part)
                assert ehrhart_by_counting(h) == base


class TestPmFamily:
    def test_pm3_shape_matches_diagram(self):
        mp = pm_family(3, 1)
        assert sorted(mp.poset.covers) == [
            ("a1", "x1"), ("a2", "x3"), ("x1", "a2"),
            ("x1", "x2"), ("x2", "x3"), ("x3", "a3"),
        ]
        assert mp.marking == {"a1": 0, "a2": 1, "a3": 2}

    def test_pm6_shape(self):
        mp = pm_family(6, 1)
        covers = set(mp.poset.covers)
        assert ("x1", "x2") in covers and ("x2", "x6") in covers
        for i in range(2, 6):
            assert (f"a{i}", f"x{i + 1}") in covers
        for i in range(3, 7):
            assert (f"x{i}", f"a{i}") in covers
        assert mp.marking["a6"] == 5

    def test_remarked_pm3(self):
        assert pm_family(3, 2).marking == {"a1": 0, "a2": 2, "a3": 4}

    def test_parameter_validation(self):
        with pytest.raises(ValueError):
            pm_family(2, 1)
        with pytest.raises(ValueError):
            pm_family(3, 0)
        with pytest.raises(ValueError):
            pm_closed_form(2, 1)

    def test_closed_form_expansions(self):
        assert pm_closed_form(3, 1) == polynomial([1, 3, 3, 1])
        # 2n(n+1)^3 + (n+1)^3
        assert pm_closed_form(4, 1) == polynomial([1, 5, 9, 7, 2])
        # (2n+1)^3
        assert pm_closed_form(3, 2) == polynomial([1, 6, 12, 8])

    def test_formula_matches_closed_form(self):
        for m in (3, 4, 5, 6):
            for c in (1, 2):
                assert ehrhart_formula_marked_order(pm_family(m, c)) == pm_closed_form(m, c)

    def test_extension_census(self):
        for m in (3, 4, 5, 6):
            assert count_restricted_extensions(pm_family(m, 1)) == 2 * m - 4

    def test_extension_words_are_augmented_extensions(self):
        mp = pm_family(3, 1)
        words = [w.word for w in restricted_linear_extensions(mp)]
        assert words == [
            ("a1", "x1", "a2", "x2", "x3", "a3"),
            ("a1", "x1", "x2", "a2", "x3", "a3"),
        ]
