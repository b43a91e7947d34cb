"""Seeded random instances for cross-validation harnesses.

Rejection sampling: random DAGs become posets, minimal and maximal elements
(plus occasional interior picks) become marked, and marks are drawn so that
comparable marked elements strictly increase.  Candidates that fail the
regularity filter, or land outside the requested size box, are redrawn.
Everything is driven by a caller-supplied random.Random, so corpora are
reproducible from a seed.
"""

from __future__ import annotations

import random
from fractions import Fraction

from .geometry import VRepresentation
from .posets import MarkedPoset, Poset, validate_marked


def random_marked_poset(
    rng: random.Random,
    max_unmarked: int = 5,
    mark_lo: int = 0,
    mark_hi: int = 4,
    min_unmarked: int = 1,
) -> MarkedPoset:
    """A random strict regular marked poset within the requested bounds."""
    while True:
        mp = _draw(rng, max_unmarked, mark_lo, mark_hi, min_unmarked)
        if mp is None:
            continue
        report = validate_marked(mp)
        if report.strict and report.regular:
            return mp


def _draw(rng: random.Random, max_unmarked: int, mark_lo: int, mark_hi: int,
          min_unmarked: int) -> MarkedPoset | None:
    n_unmarked = rng.randint(min_unmarked, max_unmarked)
    n_marked = rng.randint(2, 4)
    n = n_unmarked + n_marked
    names = [f"e{i}" for i in range(n)]
    order = names[:]
    rng.shuffle(order)
    p_edge = rng.uniform(0.2, 0.6)
    relations = [
        (order[i], order[j])
        for i in range(n)
        for j in range(i + 1, n)
        if rng.random() < p_edge
    ]
    try:
        poset = Poset.from_relations(names, relations)
    except ValueError:
        return None

    marked = set(poset.minimals()) | set(poset.maximals())
    interior = [e for e in names if e not in marked]
    rng.shuffle(interior)
    while len(marked) < n_marked and interior:
        marked.add(interior.pop())
    if not min_unmarked <= n - len(marked) <= max_unmarked:
        return None

    marking: dict[str, int] = {}
    for a in poset.topological_order():
        if a not in marked:
            continue
        floor = mark_lo
        for b in marking:
            if poset.less(b, a):
                floor = max(floor, marking[b] + 1)
        if floor > mark_hi:
            return None
        marking[a] = rng.randint(floor, mark_hi)
    try:
        return MarkedPoset(poset, marking)
    except ValueError:
        return None


def corpus(seed: int, trials: int, max_unmarked: int = 5,
           mark_lo: int = 0, mark_hi: int = 4) -> list[MarkedPoset]:
    rng = random.Random(seed)
    return [random_marked_poset(rng, max_unmarked, mark_lo, mark_hi) for _ in range(trials)]


def random_convex_points(
    rng: random.Random, v: VRepresentation, count: int
) -> list[dict[str, Fraction]]:
    """Random exact convex combinations of the vertex set."""
    points = []
    for _ in range(count):
        weights = [Fraction(rng.randint(0, 4)) for _ in v.vertices]
        if sum(weights) == 0:
            weights[rng.randrange(len(weights))] = Fraction(1)
        total = sum(weights)
        combo = [
            sum(w * vert[j] for w, vert in zip(weights, v.vertices)) / total
            for j in range(len(v.coordinates))
        ]
        points.append(dict(zip(v.coordinates, combo)))
    return points


def random_unimodular_map(
    rng: random.Random, dimension: int
) -> tuple[list[list[int]], list[int]]:
    """A random integer matrix of determinant +-1 and an integer shift."""
    matrix = [[1 if i == j else 0 for j in range(dimension)] for i in range(dimension)]
    for _ in range(2 * dimension + 2):
        op = rng.randrange(3)
        i = rng.randrange(dimension)
        j = rng.randrange(dimension)
        if op == 0 and i != j:
            f = rng.choice([-2, -1, 1, 2])
            for col in range(dimension):
                matrix[i][col] += f * matrix[j][col]
        elif op == 1:
            matrix[i], matrix[j] = matrix[j], matrix[i]
        else:
            matrix[i] = [-v for v in matrix[i]]
    shift = [rng.randint(-3, 3) for _ in range(dimension)]
    return matrix, shift


def all_chain_order_partitions(mp: MarkedPoset):
    """Every split of the unmarked elements into chain and order parts."""
    from itertools import combinations

    from .posets import ChainOrderPartition

    unmarked = list(mp.unmarked)
    for r in range(len(unmarked) + 1):
        for chain in combinations(unmarked, r):
            yield ChainOrderPartition.of(mp, chain)
