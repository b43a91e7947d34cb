"""Ehrhart polynomials of marked poset polytopes.

Two independent routes: exact lattice-point counting plus interpolation, and
a closed formula that sums, over the linear extensions of the mark-augmented
poset, products of binomial polynomials read off each extension's descent
pattern between consecutive marked elements.  The two routes are held equal
on every corpus instance by the test suite.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Iterator, Mapping

from .errors import (
    ExtensionExplosion,
    NonIntegralVertices,
    PreconditionViolated,
    VerificationFailed,
)
from .geometry import (
    ONE_POLYNOMIAL,
    ZERO_POLYNOMIAL,
    HRepresentation,
    UnivariatePolynomial,
    affine_dimension,
    count_lattice_points,
    enumerate_vertices,
    interpolate_polynomial,
    polynomial,
)
from .posets import (
    ExtensionWord,
    MarkedPoset,
    Poset,
    augment_marked_order,
    canonical_labeling,
    check_natural_labeling,
    linear_extensions,
    require_strict_regular,
)

DEFAULT_EXTENSION_CAP = 10**6


def ehrhart_by_counting(h: HRepresentation, work_cap: int | None = None) -> UnivariatePolynomial:
    """Count lattice points at dilations 0..dim, interpolate, verify at dim+1."""
    v = enumerate_vertices(h, work_cap)
    for p in v.vertices:
        if any(x.denominator != 1 for x in p):
            raise NonIntegralVertices(f"vertex {p} is not integral")
    dim = affine_dimension(v)
    points = [(n, count_lattice_points(h, n, work_cap)) for n in range(dim + 1)]
    poly = interpolate_polynomial(points)
    probe = count_lattice_points(h, dim + 1, work_cap)
    if poly.evaluate(dim + 1) != probe:
        raise VerificationFailed(
            f"interpolated polynomial disagrees with the count at dilation {dim + 1}")
    return poly


def _tie_break_poset(mp: MarkedPoset, labeling: Mapping[str, int] | None) -> tuple[Poset, dict[str, int]]:
    """The augmented poset with equal-mark marked elements totally ordered.

    Ties are broken by the reference labeling (by id for the canonical one),
    so the extension stream counts each family of order-preserving maps once.
    """
    augmented = augment_marked_order(mp)
    marked_sorted = sorted(mp.marked)
    if labeling is None:
        relations = list(augmented.covers)
        for a in marked_sorted:
            for b in marked_sorted:
                if a < b and mp.value(a) == mp.value(b):
                    relations.append((a, b))
        tie_poset = Poset.from_relations(augmented.elements, relations)
        return tie_poset, canonical_labeling(tie_poset)
    check_natural_labeling(augmented, labeling)
    relations = list(augmented.covers)
    for a in marked_sorted:
        for b in marked_sorted:
            if a != b and mp.value(a) == mp.value(b) and labeling[a] < labeling[b]:
                relations.append((a, b))
    tie_poset = Poset.from_relations(augmented.elements, relations)
    check_natural_labeling(tie_poset, labeling)
    return tie_poset, dict(labeling)


def restricted_linear_extensions(
    mp: MarkedPoset, labeling: Mapping[str, int] | None = None
) -> Iterator[ExtensionWord]:
    """Linear extensions with the marked elements in nondecreasing mark order.

    Equal-mark marked elements are kept in one canonical relative order, so
    each word of unmarked segments appears exactly once.
    """
    tie_poset, lab = _tie_break_poset(mp, labeling)
    return linear_extensions(tie_poset, lab)


def count_restricted_extensions(mp: MarkedPoset, cap: int = DEFAULT_EXTENSION_CAP) -> int:
    total = 0
    for _ in restricted_linear_extensions(mp):
        total += 1
        if total > cap:
            raise ExtensionExplosion(f"more than {cap} restricted linear extensions")
    return total


def _segment_factor(delta: Fraction, descents: int, k: int) -> UnivariatePolynomial:
    """The polynomial C(n*delta - descents + k, k) expanded in n."""
    if k == 0:
        if descents:
            raise VerificationFailed("descent between adjacent marked elements")
        return ONE_POLYNOMIAL
    if descents > k:
        raise VerificationFailed("segment descent count exceeds its length")
    result = ONE_POLYNOMIAL
    for j in range(k):
        result = result * polynomial([k - descents - j, delta])
    return result * Fraction(1, math.factorial(k))


def ehrhart_formula_marked_order(
    mp: MarkedPoset,
    labeling: Mapping[str, int] | None = None,
    extension_cap: int = DEFAULT_EXTENSION_CAP,
) -> UnivariatePolynomial:
    """The closed Ehrhart formula of the marked order polytope.

    Streams the restricted linear extensions; each extension contributes the
    product, over its maximal unmarked segments between consecutive marked
    elements a and b (k elements, d descents counted from a's position up to
    just before b's), of C(n*(mark(b) - mark(a)) - d + k, k).
    """
    require_strict_regular(mp, "ehrhart_formula_marked_order")
    if not mp.is_integral():
        raise PreconditionViolated("the closed formula needs an integral marking")

    total = ZERO_POLYNOMIAL
    seen = 0
    for ext in restricted_linear_extensions(mp, labeling):
        seen += 1
        if seen > extension_cap:
            raise ExtensionExplosion(f"more than {extension_cap} restricted linear extensions")
        marked_at = [i for i, e in enumerate(ext.word) if e in mp.marked]
        term = ONE_POLYNOMIAL
        for s, t in zip(marked_at, marked_at[1:]):
            delta = mp.value(ext.word[t]) - mp.value(ext.word[s])
            descents = ext.segment_descents(s, t)
            term = term * _segment_factor(delta, descents, t - s - 1)
        total = total + term
    return total


def pm_family(m: int, c: int) -> MarkedPoset:
    """The ladder-with-a-loose-rung family of marked posets.

    Elements a_1..a_m (marked, equidistant marks with spacing c) alternate
    with unmarked x_1..x_m along a zigzag chain; x_2 hangs between x_1 and
    x_m, free of the rest, which makes the Ehrhart polynomial collapse to a
    closed form.
    """
    if m < 3:
        raise ValueError("family needs m >= 3")
    if c < 1:
        raise ValueError("mark spacing c must be a positive integer")
    a = [f"a{i}" for i in range(1, m + 1)]
    x = [f"x{i}" for i in range(1, m + 1)]
    relations = [(a[0], x[0]), (x[0], a[1]), (x[0], x[1]), (x[1], x[m - 1])]
    for i in range(2, m):
        relations.append((a[i - 1], x[i]))
    for i in range(3, m + 1):
        relations.append((x[i - 1], a[i - 1]))
    poset = Poset.from_relations(a + x, relations)
    marking = {a[i]: i * c for i in range(m)}
    return MarkedPoset(poset, marking)


def pm_closed_form(m: int, c: int) -> UnivariatePolynomial:
    """(m-2)*n*c*(n*c+1)^(m-1) + (n*c+1)^(m-1), expanded."""
    if m < 3:
        raise ValueError("family needs m >= 3")
    if c < 1:
        raise ValueError("mark spacing c must be a positive integer")
    base = polynomial([1, c]) ** (m - 1)
    return base * polynomial([0, (m - 2) * c]) + base
