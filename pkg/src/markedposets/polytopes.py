"""Polytopes attached to a marked poset, and their face-partition combinatorics.

All three families live in the projected space of unmarked coordinates: the
fixed marked values are substituted into the constraints rather than kept as
equalities.  Coordinates are the unmarked element ids in lexicographic order.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping

from .errors import DimensionTooLarge, InfeasibleMarking, PointOutsidePolytope
from .geometry import HRepresentation, LinearInequality, VRepresentation, contains
from .posets import (
    ChainOrderPartition,
    MarkedPoset,
    maximal_marked_chains,
    require_strict_regular,
)

DEFAULT_ASSIGNMENT_CAP = 10**7


def build_order_hrep(mp: MarkedPoset) -> HRepresentation:
    """Inequalities x_p <= x_q per cover, with marked endpoints substituted."""
    poset = mp.poset
    inequalities = []
    for p, q in poset.covers:
        p_marked, q_marked = p in mp.marked, q in mp.marked
        if p_marked and q_marked:
            if mp.value(p) > mp.value(q):
                raise InfeasibleMarking(f"cover ({p!r}, {q!r}) has decreasing marks")
            continue
        if p_marked:
            inequalities.append(LinearInequality({q: -1}, -mp.value(p)))
        elif q_marked:
            inequalities.append(LinearInequality({p: 1}, mp.value(q)))
        else:
            inequalities.append(LinearInequality({p: 1, q: -1}, 0))
    return HRepresentation(mp.unmarked, inequalities)


def build_chain_hrep(mp: MarkedPoset) -> HRepresentation:
    """Nonnegative coordinates with chain sums bounded by marking differences."""
    inequalities = [LinearInequality({p: -1}, 0) for p in mp.unmarked]
    for a, interior, b in maximal_marked_chains(mp):
        slack = mp.value(b) - mp.value(a)
        if slack < 0:
            raise InfeasibleMarking(
                f"chain {a!r} < ... < {b!r} has negative slack {slack}")
        if interior:
            counts: dict[str, int] = {}
            for p in interior:
                counts[p] = counts.get(p, 0) + 1
            inequalities.append(LinearInequality(counts, slack))
    return HRepresentation(mp.unmarked, inequalities)


def _saturated_chains_through(
    mp: MarkedPoset, endpoints: frozenset[str], interior: frozenset[str]
) -> list[tuple[str, tuple[str, ...], str]]:
    poset = mp.poset
    chains: list[tuple[str, tuple[str, ...], str]] = []

    def walk(start: str, path: list[str], current: str) -> None:
        for q in poset.upper_covers(current):
            if q in endpoints:
                chains.append((start, tuple(path), q))
            elif q in interior:
                walk(start, path + [q], q)

    for a in sorted(endpoints):
        walk(a, [], a)
    return sorted(chains)


def build_chain_order_hrep(mp: MarkedPoset, part: ChainOrderPartition) -> HRepresentation:
    """The hybrid family: chain conditions on C, order conditions on O.

    One inequality per saturated chain whose endpoints lie in P* or O and
    whose interior lies in C (r >= 0 interior elements); chains between two
    marked endpoints with r = 0 degenerate to marking consistency checks.
    """
    part.validate(mp)
    endpoints = frozenset(mp.marked) | part.order
    inequalities = [LinearInequality({p: -1}, 0) for p in sorted(part.chain)]
    for a, interior, b in _saturated_chains_through(mp, endpoints, part.chain):
        coeffs: dict[str, Fraction | int] = {}
        rhs = Fraction(0)
        for p in interior:
            coeffs[p] = coeffs.get(p, 0) + 1
        if a in mp.marked:
            rhs -= mp.value(a)
        else:
            coeffs[a] = coeffs.get(a, 0) + 1
        if b in mp.marked:
            rhs += mp.value(b)
        else:
            coeffs[b] = coeffs.get(b, 0) - 1
        coeffs = {c: v for c, v in coeffs.items() if v != 0}
        if not coeffs:
            if rhs < 0:
                raise InfeasibleMarking(
                    f"chain {a!r} < ... < {b!r} has negative slack {rhs}")
            continue
        inequalities.append(LinearInequality(coeffs, rhs))
    return HRepresentation(mp.unmarked, inequalities)


@dataclass(frozen=True)
class FacePartition:
    """A partition of the poset elements, with its marked-free blocks singled out."""

    blocks: tuple[frozenset[str], ...]
    free_blocks: tuple[frozenset[str], ...]

    @classmethod
    def of(cls, mp: MarkedPoset, blocks: Iterable[Iterable[str]]) -> "FacePartition":
        normalized = tuple(sorted((frozenset(b) for b in blocks), key=min))
        free = tuple(b for b in normalized if not (b & mp.marked))
        return cls(normalized, free)


def _full_point(mp: MarkedPoset, x: Mapping[str, Fraction]) -> dict[str, Fraction]:
    values = {a: mp.value(a) for a in mp.marked}
    for p in mp.unmarked:
        values[p] = Fraction(x[p])
    return values


def face_partition_of_point(mp: MarkedPoset, x: Mapping[str, Fraction]) -> FacePartition:
    """The partition gluing comparable elements with equal coordinate values.

    For points of the order polytope the transitive closure over comparable
    pairs coincides with the closure over covers, since values increase along
    saturated chains.
    """
    order_hrep = build_order_hrep(mp)
    point = {p: Fraction(x[p]) for p in mp.unmarked}
    if not contains(order_hrep, point):
        raise PointOutsidePolytope("point violates the order constraints")
    values = _full_point(mp, point)
    poset = mp.poset
    parent = {e: e for e in poset.elements}

    def find(e: str) -> str:
        while parent[e] != e:
            parent[e] = parent[parent[e]]
            e = parent[e]
        return e

    for p, q in poset.covers:
        if values[p] == values[q]:
            rp, rq = find(p), find(q)
            if rp != rq:
                parent[rp] = rq
    groups: dict[str, set[str]] = {}
    for e in poset.elements:
        groups.setdefault(find(e), set()).add(e)
    return FacePartition.of(mp, groups.values())


def is_face_partition(mp: MarkedPoset, fp: FacePartition) -> bool:
    """Decide whether a partition arises from a face of the order polytope.

    Checks the three characterizing conditions: blocks connected as induced
    subposets, the induced block relation antisymmetric, and the quotient
    marking well-defined, order-compatible and strict.
    """
    poset = mp.poset
    block_of: dict[str, int] = {}
    for i, block in enumerate(fp.blocks):
        if not block:
            raise ValueError("empty block")
        for e in block:
            if e in block_of:
                raise ValueError(f"element {e!r} appears in two blocks")
            if e not in poset._above:
                raise ValueError(f"unknown element {e!r}")
            block_of[e] = i
    if len(block_of) != len(poset.elements):
        raise ValueError("blocks do not cover the poset")

    for block in fp.blocks:
        members = sorted(block)
        seen = {members[0]}
        frontier = [members[0]]
        while frontier:
            e = frontier.pop()
            for f in block:
                if f not in seen and poset.comparable(e, f):
                    seen.add(f)
                    frontier.append(f)
        if len(seen) != len(block):
            return False

    k = len(fp.blocks)
    succ: dict[int, set[int]] = {i: set() for i in range(k)}
    for p, q in poset.covers:
        bp, bq = block_of[p], block_of[q]
        if bp != bq:
            succ[bp].add(bq)
    reach: dict[int, set[int]] = {i: set() for i in range(k)}
    changed = True
    while changed:
        changed = False
        for i in range(k):
            extra = set()
            for j in succ[i] | reach[i]:
                extra |= succ[j] | reach[j]
            new = (succ[i] | reach[i] | extra)
            if new != reach[i]:
                reach[i] = new
                changed = True
    if any(i in reach[i] for i in range(k)):
        return False

    block_marks: list[set[Fraction]] = [set() for _ in range(k)]
    for a in mp.marked:
        block_marks[block_of[a]].add(mp.value(a))
    for i in range(k):
        if len(block_marks[i]) > 1:
            return False
    for i in range(k):
        if not block_marks[i]:
            continue
        for j in reach[i]:
            if block_marks[j] and min(block_marks[i]) >= min(block_marks[j]):
                return False
    return True


def order_vertices_combinatorial(
    mp: MarkedPoset, node_cap: int = DEFAULT_ASSIGNMENT_CAP
) -> VRepresentation:
    """Vertices of the marked order polytope via zero-free-block assignments.

    Searches order-preserving assignments of marking values to the unmarked
    elements, depth-first in a linear-extension order so every cover is
    checked as soon as both endpoints have values; an assignment is a vertex
    exactly when its face partition has no free block.
    """
    require_strict_regular(mp, "order_vertices_combinatorial")
    poset = mp.poset
    values = sorted({mp.value(a) for a in mp.marked})
    order = [e for e in poset.topological_order() if e not in mp.marked]
    assignment: dict[str, Fraction] = {}
    vertices: list[tuple[Fraction, ...]] = []
    nodes = 0

    def feasible(e: str, v: Fraction) -> bool:
        for p in poset.lower_covers(e):
            lo = mp.value(p) if p in mp.marked else assignment.get(p)
            if lo is not None and lo > v:
                return False
        for q in poset.upper_covers(e):
            if q in mp.marked and mp.value(q) < v:
                return False
        return True

    def rec(i: int) -> None:
        nonlocal nodes
        nodes += 1
        if nodes > node_cap:
            raise DimensionTooLarge("assignment search exceeds the node cap")
        if i == len(order):
            point = {p: assignment[p] for p in mp.unmarked}
            fp = face_partition_of_point(mp, point)
            if not fp.free_blocks:
                vertices.append(tuple(point[p] for p in mp.unmarked))
            return
        e = order[i]
        for v in values:
            if feasible(e, v):
                assignment[e] = v
                rec(i + 1)
                del assignment[e]

    rec(0)
    return VRepresentation(tuple(mp.unmarked), tuple(sorted(set(vertices))))


def order_facets_combinatorial(mp: MarkedPoset) -> list[LinearInequality]:
    """The facet list of the marked order polytope read off the covers.

    One inequality per cover involving an unmarked element; for a strict
    regular marked poset this equals the irredundant geometric description.
    """
    require_strict_regular(mp, "order_facets_combinatorial")
    facets: set[LinearInequality] = set()
    for p, q in mp.poset.covers:
        p_marked, q_marked = p in mp.marked, q in mp.marked
        if p_marked and q_marked:
            continue
        if p_marked:
            facets.add(LinearInequality({q: -1}, -mp.value(p)))
        elif q_marked:
            facets.add(LinearInequality({p: 1}, mp.value(q)))
        else:
            facets.add(LinearInequality({p: 1, q: -1}, 0))
    coords = mp.unmarked
    return sorted(facets, key=lambda f: f.key(coords))
