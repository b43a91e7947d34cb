"""Deciding 2-levelness: direct vertex-value test and combinatorial criteria.

The direct test is the ground truth: a polytope is 2-level exactly when every
facet functional takes at most two values on the vertex set.  The criteria
decide the same question for the three marked-poset families from the poset
data (plus vertex value sets), and the test suite holds them to 100%
agreement with the direct test.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .geometry import (
    HRepresentation,
    LinearInequality,
    VRepresentation,
    classify_inequalities,
    enumerate_vertices,
    evaluate_affine_values,
    irredundant,
)
from .polytopes import build_chain_hrep, build_chain_order_hrep, build_order_hrep
from .posets import (
    ChainOrderPartition,
    MarkedPoset,
    is_strict_regular,
    require_strict,
    require_strict_regular,
    restrict_marked,
)


@dataclass(frozen=True)
class TwoLevelWitness:
    facet: LinearInequality
    values: tuple[Fraction, ...]


@dataclass(frozen=True)
class TwoLevelResult:
    two_level: bool
    witness: TwoLevelWitness | None = None


def is_two_level_direct(h: HRepresentation, work_cap: int | None = None) -> TwoLevelResult:
    """Check every facet functional for at most two distinct vertex values.

    The witness, when present, is the first violating facet in the canonical
    inequality order together with its distinct value set.
    """
    v, _, facets, _ = classify_inequalities(h, work_cap)
    for facet in facets:
        values = tuple(sorted(set(evaluate_affine_values(v, facet))))
        if len(values) > 2:
            return TwoLevelResult(False, TwoLevelWitness(facet, values))
    return TwoLevelResult(True, None)


def _coupled_pieces(mp: MarkedPoset) -> list[frozenset[str]]:
    """Unmarked elements grouped by covers between unmarked elements.

    Marked coordinates are constants, so two unmarked coordinates interact
    only along a cover joining them directly; the polytope is the product of
    its pieces' polytopes.
    """
    neighbours: dict[str, set[str]] = {p: set() for p in mp.unmarked}
    for p, q in mp.poset.covers:
        if p not in mp.marked and q not in mp.marked:
            neighbours[p].add(q)
            neighbours[q].add(p)
    pieces = []
    seen: set[str] = set()
    for start in mp.unmarked:
        if start in seen:
            continue
        stack, piece = [start], set()
        while stack:
            e = stack.pop()
            if e in piece:
                continue
            piece.add(e)
            stack.extend(neighbours[e] - piece)
        seen |= piece
        pieces.append(frozenset(piece))
    return pieces


def order_two_level_criterion(mp: MarkedPoset) -> bool:
    """2-levelness of the marked order polytope from the cover structure.

    The polytope is a product over the pieces of unmarked elements coupled by
    unmarked covers; it is 2-level exactly when, for every piece, the marked
    values entering from below all agree and the marked values bounding it
    from above all agree.  (Components joined only through marked elements
    factor apart, and equal-valued boundary marks merge into a single bound,
    so counting extremal *elements* per Hasse component rejects polytopes
    that are in fact products of 2-level factors.)  Requires a strict regular
    input.
    """
    require_strict_regular(mp, "order_two_level_criterion")
    poset = mp.poset
    for piece in _coupled_pieces(mp):
        below: set = set()
        above: set = set()
        for p, q in poset.covers:
            if q in piece and p in mp.marked:
                below.add(mp.value(p))
            elif p in piece and q in mp.marked:
                above.add(mp.value(q))
        if len(below) != 1 or len(above) != 1:
            return False
    return True


@dataclass(frozen=True)
class ChainTwoLevelResult:
    two_level: bool
    scaling: dict[str, Fraction] | None = None


def _column_values(v: VRepresentation, coordinate: str) -> tuple[Fraction, ...]:
    j = v.coordinates.index(coordinate)
    return tuple(sorted({p[j] for p in v.vertices}))


def chain_two_level_criterion(
    mp: MarkedPoset, work_cap: int | None = None
) -> ChainTwoLevelResult:
    """2-levelness of the marked chain polytope via the normalizing scaling.

    Every coordinate must take exactly the values {0, c_p} on the vertex set;
    after scaling coordinate p by 1/c_p the irredundant description must
    consist of nonnegativity facets and unit chain sums bounded by 1.  The
    scaling (the per-coordinate multipliers) is returned on success.

    Only strictness is required: the chain polytope never sees the order
    redundancies that regularity rules out.
    """
    require_strict(mp, "chain_two_level_criterion")
    h = build_chain_hrep(mp)
    if not h.coordinates:
        return ChainTwoLevelResult(True, {})
    v = enumerate_vertices(h, work_cap)
    scale: dict[str, Fraction] = {}
    for p in h.coordinates:
        values = _column_values(v, p)
        if len(values) != 2 or values[0] != 0 or values[1] <= 0:
            return ChainTwoLevelResult(False, None)
        scale[p] = Fraction(1) / values[1]

    scaled = HRepresentation(
        h.coordinates,
        [LinearInequality({c: Fraction(a) / scale[c] for c, a in i.coeffs.items()}, i.rhs)
         for i in h.inequalities],
    )
    reduced = irredundant(scaled, work_cap)
    if reduced.equalities:
        return ChainTwoLevelResult(False, None)
    for facet in reduced.inequalities:
        coeffs = list(facet.coeffs.values())
        if len(coeffs) == 1 and coeffs[0] == -1 and facet.rhs == 0:
            continue
        if all(a == 1 for a in coeffs) and facet.rhs == 1:
            continue
        return ChainTwoLevelResult(False, None)
    return ChainTwoLevelResult(True, scale)


def chain_order_two_level_criterion(
    mp: MarkedPoset,
    part: ChainOrderPartition,
    work_cap: int | None = None,
) -> bool:
    """2-levelness of the marked chain-order polytope.

    Two conditions: (a) the marked order polytope restricted to the non-chain
    elements is 2-level, and (b) every irredundant inequality touching a chain
    coordinate takes exactly two values on the vertex set, whose gap equals
    the (common) vertex-value span of its chain coordinates -- i.e. the facet
    bounds differ by exactly 1 after the per-chain-coordinate scaling.

    Condition (a) uses the component-counting criterion when the restricted
    marked poset is still regular; restriction can break regularity, in which
    case the direct test decides the (smaller) restricted polytope.
    """
    require_strict(mp, "chain_order_two_level_criterion")
    part.validate(mp)

    restricted = restrict_marked(mp, part.order | mp.marked)
    if is_strict_regular(restricted):
        order_ok = order_two_level_criterion(restricted)
    else:
        order_ok = is_two_level_direct(build_order_hrep(restricted), work_cap).two_level
    if not order_ok:
        return False
    if not part.chain:
        return True

    h = build_chain_order_hrep(mp, part)
    v = enumerate_vertices(h, work_cap)
    span: dict[str, Fraction] = {}
    for c in sorted(part.chain):
        values = _column_values(v, c)
        if len(values) != 2 or values[0] != 0 or values[1] <= 0:
            return False
        span[c] = values[1]

    _, _, facets, _ = classify_inequalities(h, work_cap)
    for facet in facets:
        chain_support = [c for c in facet.coeffs if c in part.chain]
        if not chain_support:
            continue
        gaps = {abs(facet.coeffs[c]) * span[c] for c in chain_support}
        if len(gaps) != 1:
            return False
        s = gaps.pop()
        values = tuple(sorted(set(evaluate_affine_values(v, facet))))
        if len(values) > 2:
            return False
        if facet.rhs - values[0] != s:
            return False
    return True
