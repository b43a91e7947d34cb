"""Finite posets, marked posets, and linear-extension machinery.

Elements are opaque string ids; every deterministic ordering in this module
is lexicographic in those ids.  Posets are stored by their covering relations
(the Hasse diagram) and are validated to be acyclic with an irredundant cover
set.  A marked poset attaches an order-preserving rational marking to a subset
of elements that must contain all minimal and maximal elements.
"""

from __future__ import annotations

from bisect import insort
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Iterator, Mapping

from .errors import PreconditionViolated


class Poset:
    """A finite poset given by elements and covering relations p < q."""

    def __init__(self, elements: Iterable[str], covers: Iterable[tuple[str, str]]):
        self.elements: tuple[str, ...] = tuple(elements)
        self.covers: tuple[tuple[str, str], ...] = tuple((p, q) for p, q in covers)
        seen = set(self.elements)
        if len(seen) != len(self.elements):
            raise ValueError("duplicate element ids")
        for p, q in self.covers:
            if p not in seen or q not in seen:
                raise ValueError(f"cover ({p!r}, {q!r}) references unknown element")
            if p == q:
                raise ValueError(f"cover ({p!r}, {q!r}) is a loop")
        self._up_covers: dict[str, tuple[str, ...]] = {e: () for e in self.elements}
        self._down_covers: dict[str, tuple[str, ...]] = {e: () for e in self.elements}
        up: dict[str, list[str]] = {e: [] for e in self.elements}
        down: dict[str, list[str]] = {e: [] for e in self.elements}
        for p, q in self.covers:
            up[p].append(q)
            down[q].append(p)
        for e in self.elements:
            self._up_covers[e] = tuple(sorted(up[e]))
            self._down_covers[e] = tuple(sorted(down[e]))
        self._above = self._reachability()
        for p, q in self.covers:
            if p in self._above[q]:
                raise ValueError("cover relation contains a cycle")
        self._check_irredundant()

    def _reachability(self) -> dict[str, frozenset[str]]:
        # up-sets including the element itself, computed bottom-up in reverse
        # topological order; raises on cycles via the topological sort.
        order = self.topological_order()
        above: dict[str, frozenset[str]] = {}
        for e in reversed(order):
            acc: set[str] = {e}
            for q in self._up_covers[e]:
                acc |= above[q]
            above[e] = frozenset(acc)
        return above

    def topological_order(self) -> list[str]:
        """Elements in a topological order (smallest id first among available)."""
        indeg = {e: len(self._down_covers[e]) for e in self.elements}
        avail = sorted(e for e in self.elements if indeg[e] == 0)
        out: list[str] = []
        while avail:
            e = avail.pop(0)
            out.append(e)
            for q in self._up_covers[e]:
                indeg[q] -= 1
                if indeg[q] == 0:
                    insort(avail, q)
        if len(out) != len(self.elements):
            raise ValueError("cover relation contains a cycle")
        return out

    def _check_irredundant(self) -> None:
        for p, q in self.covers:
            for r in self._up_covers[p]:
                if r != q and q in self._above[r]:
                    raise ValueError(f"cover ({p!r}, {q!r}) is implied by other covers")

    @classmethod
    def from_relations(cls, elements: Iterable[str], relations: Iterable[tuple[str, str]]) -> "Poset":
        """Build a poset from arbitrary strict relations, reduced to covers."""
        elements = tuple(elements)
        index = set(elements)
        succ: dict[str, set[str]] = {e: set() for e in elements}
        for p, q in relations:
            if p not in index or q not in index:
                raise ValueError(f"relation ({p!r}, {q!r}) references unknown element")
            if p == q:
                raise ValueError(f"relation ({p!r}, {q!r}) is a loop")
            succ[p].add(q)
        closure = _transitive_closure(elements, succ)
        for e in elements:
            if e in closure[e]:
                raise ValueError("relations contain a cycle")
        covers = []
        for p in elements:
            for q in sorted(closure[p]):
                if not any(q in closure[r] for r in closure[p] if r != q):
                    covers.append((p, q))
        return cls(elements, covers)

    def leq(self, p: str, q: str) -> bool:
        """p <= q in the transitive closure of the covers."""
        if p not in self._above or q not in self._above:
            raise KeyError(f"unknown element id {p if p not in self._above else q!r}")
        return q in self._above[p]

    def less(self, p: str, q: str) -> bool:
        return p != q and self.leq(p, q)

    def comparable(self, p: str, q: str) -> bool:
        return self.leq(p, q) or self.leq(q, p)

    def up_set(self, p: str) -> frozenset[str]:
        """All q with p <= q, including p."""
        return self._above[p]

    def upper_covers(self, p: str) -> tuple[str, ...]:
        return self._up_covers[p]

    def lower_covers(self, p: str) -> tuple[str, ...]:
        return self._down_covers[p]

    def minimals(self) -> tuple[str, ...]:
        return tuple(sorted(e for e in self.elements if not self._down_covers[e]))

    def maximals(self) -> tuple[str, ...]:
        return tuple(sorted(e for e in self.elements if not self._up_covers[e]))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Poset):
            return NotImplemented
        return (sorted(self.elements) == sorted(other.elements)
                and sorted(self.covers) == sorted(other.covers))

    def __repr__(self) -> str:
        return f"Poset(elements={list(self.elements)!r}, covers={list(self.covers)!r})"


def _transitive_closure(elements: tuple[str, ...], succ: Mapping[str, set[str]]) -> dict[str, set[str]]:
    closure: dict[str, set[str]] = {e: set(succ[e]) for e in elements}
    changed = True
    while changed:
        changed = False
        for e in elements:
            extra: set[str] = set()
            for q in closure[e]:
                extra |= closure[q] - closure[e] - {q}
            if extra - closure[e]:
                closure[e] |= extra
                changed = True
    return closure


def transitive_relation(poset: Poset, p: str, q: str) -> bool:
    """Decide p <= q in the poset's order (reachability in the cover digraph)."""
    return poset.leq(p, q)


class MarkedPoset:
    """A poset with a rational marking on a subset containing all extremes.

    The marking must be order-preserving; strictness and regularity are not
    required here but are reported by :func:`validate_marked` and demanded by
    the operations whose theory needs them.
    """

    def __init__(self, poset: Poset, marking: Mapping[str, int | Fraction]):
        self.poset = poset
        self.marking: dict[str, Fraction] = {a: Fraction(v) for a, v in marking.items()}
        self.marked: frozenset[str] = frozenset(self.marking)
        for a in self.marked:
            if a not in poset._above:
                raise ValueError(f"marked element {a!r} is not in the poset")
        for e in poset.minimals():
            if e not in self.marked:
                raise ValueError(f"minimal element {e!r} must be marked")
        for e in poset.maximals():
            if e not in self.marked:
                raise ValueError(f"maximal element {e!r} must be marked")
        marked_sorted = sorted(self.marked)
        for a in marked_sorted:
            for b in marked_sorted:
                if a != b and poset.less(a, b) and self.marking[a] > self.marking[b]:
                    raise ValueError(
                        f"marking is not order-preserving on {a!r} < {b!r}")
        self.unmarked: tuple[str, ...] = tuple(
            sorted(e for e in poset.elements if e not in self.marked))

    def value(self, a: str) -> Fraction:
        return self.marking[a]

    def is_integral(self) -> bool:
        return all(v.denominator == 1 for v in self.marking.values())

    def __repr__(self) -> str:
        marks = {a: str(v) for a, v in sorted(self.marking.items())}
        return f"MarkedPoset({self.poset!r}, marking={marks!r})"


@dataclass(frozen=True)
class ChainOrderPartition:
    """A split of the unmarked elements into chain and order parts."""

    chain: frozenset[str]
    order: frozenset[str]

    @classmethod
    def of(cls, mp: MarkedPoset, chain: Iterable[str]) -> "ChainOrderPartition":
        chain_set = frozenset(chain)
        return cls(chain_set, frozenset(mp.unmarked) - chain_set)

    def validate(self, mp: MarkedPoset) -> None:
        unmarked = frozenset(mp.unmarked)
        if self.chain & self.order:
            raise ValueError("chain and order parts overlap")
        if self.chain | self.order != unmarked:
            raise ValueError("partition does not cover the unmarked elements")


@dataclass(frozen=True)
class MarkingReport:
    strict: bool
    regular: bool
    violations: tuple[tuple, ...]


def validate_marked(mp: MarkedPoset) -> MarkingReport:
    """Report strictness and regularity, with a witness tuple per failure.

    Strict: comparable marked a < b implies marking(a) < marking(b).
    Regular: for every cover p < q and marked a <= q, p <= b, either a = b
    or marking(a) < marking(b).
    """
    poset = mp.poset
    violations: list[tuple] = []
    strict = True
    marked_sorted = sorted(mp.marked)
    for a in marked_sorted:
        for b in marked_sorted:
            if a != b and poset.less(a, b) and mp.value(a) >= mp.value(b):
                strict = False
                violations.append(("strict", a, b))
    regular = True
    for p, q in sorted(poset.covers):
        below_q = [a for a in marked_sorted if poset.leq(a, q)]
        above_p = [b for b in marked_sorted if poset.leq(p, b)]
        for a in below_q:
            for b in above_p:
                if a != b and mp.value(a) >= mp.value(b):
                    regular = False
                    violations.append(("regular", (p, q), a, b))
    return MarkingReport(strict=strict, regular=regular, violations=tuple(violations))


def is_strict_regular(mp: MarkedPoset) -> bool:
    report = validate_marked(mp)
    return report.strict and report.regular


def require_strict_regular(mp: MarkedPoset, operation: str) -> None:
    report = validate_marked(mp)
    if not (report.strict and report.regular):
        missing = [name for name, ok in (("strict", report.strict), ("regular", report.regular)) if not ok]
        raise PreconditionViolated(f"{operation} requires a strict regular marked poset; not {' or '.join(missing)}")


def require_strict(mp: MarkedPoset, operation: str) -> None:
    if not validate_marked(mp).strict:
        raise PreconditionViolated(f"{operation} requires a strict marking")


def hasse_components(mp: MarkedPoset) -> list[tuple[str, ...]]:
    """Connected components of the undirected Hasse diagram, sorted by least id."""
    poset = mp.poset
    neighbours: dict[str, set[str]] = {e: set() for e in poset.elements}
    for p, q in poset.covers:
        neighbours[p].add(q)
        neighbours[q].add(p)
    seen: set[str] = set()
    components: list[tuple[str, ...]] = []
    for start in sorted(poset.elements):
        if start in seen:
            continue
        stack = [start]
        comp: set[str] = set()
        while stack:
            e = stack.pop()
            if e in comp:
                continue
            comp.add(e)
            stack.extend(neighbours[e] - comp)
        seen |= comp
        components.append(tuple(sorted(comp)))
    return sorted(components, key=lambda c: c[0])


def maximal_marked_chains(mp: MarkedPoset) -> list[tuple[str, tuple[str, ...], str]]:
    """Saturated chains a < p_1 < ... < p_k < b with marked ends, unmarked interior.

    Each chain is reported once as (a, interior, b) with k >= 0 interior
    elements, in lexicographic order.
    """
    poset = mp.poset
    chains: list[tuple[str, tuple[str, ...], str]] = []

    def walk(start: str, path: list[str], current: str) -> None:
        for q in poset.upper_covers(current):
            if q in mp.marked:
                chains.append((start, tuple(path), q))
            else:
                walk(start, path + [q], q)

    for a in sorted(mp.marked):
        walk(a, [], a)
    return sorted(chains)


def augment_marked_order(mp: MarkedPoset) -> Poset:
    """Add a < b for marked pairs with strictly increasing marks, then re-reduce."""
    poset = mp.poset
    relations = list(poset.covers)
    marked_sorted = sorted(mp.marked)
    for a in marked_sorted:
        for b in marked_sorted:
            if a != b and mp.value(a) < mp.value(b):
                relations.append((a, b))
    return Poset.from_relations(poset.elements, relations)


@dataclass(frozen=True)
class ExtensionWord:
    """A linear extension as a word, with per-prefix descent counts.

    ``descent_prefix[i]`` counts the positions j < i (0-based) at which the
    reference labeling decreases from ``word[j]`` to ``word[j+1]``; it starts
    at 0 and increases by at most 1 per step.
    """

    word: tuple[str, ...]
    descent_prefix: tuple[int, ...]
    labeling: Mapping[str, int] = field(compare=False)

    @property
    def descents(self) -> int:
        return self.descent_prefix[-1] if self.descent_prefix else 0

    def segment_descents(self, i: int, j: int) -> int:
        """Number of descents at positions i..j-1 (0-based word indices)."""
        return self.descent_prefix[j] - self.descent_prefix[i]


def canonical_labeling(poset: Poset) -> dict[str, int]:
    """The natural labeling given by the smallest-id-first topological order."""
    return {e: i + 1 for i, e in enumerate(poset.topological_order())}


def check_natural_labeling(poset: Poset, labeling: Mapping[str, int]) -> None:
    n = len(poset.elements)
    values = sorted(labeling.get(e) for e in poset.elements)
    if len(labeling) != n or values != list(range(1, n + 1)):
        raise ValueError("labeling is not a bijection onto 1..n")
    for p, q in poset.covers:
        if labeling[p] > labeling[q]:
            raise ValueError(f"labeling is not order-preserving on cover ({p!r}, {q!r})")


def linear_extensions(poset: Poset, labeling: Mapping[str, int] | None = None) -> Iterator[ExtensionWord]:
    """Yield every linear extension once, lexicographically in labels.

    The labeling defaults to :func:`canonical_labeling`; a different natural
    labeling changes descent statistics but never the set of words.
    """
    if labeling is None:
        labeling = canonical_labeling(poset)
    else:
        check_natural_labeling(poset, labeling)
    indeg = {e: len(poset.lower_covers(e)) for e in poset.elements}
    available = sorted((e for e in poset.elements if indeg[e] == 0), key=labeling.__getitem__)
    word: list[str] = []
    prefix: list[int] = []

    def emit() -> ExtensionWord:
        return ExtensionWord(tuple(word), tuple(prefix), dict(labeling))

    def rec() -> Iterator[ExtensionWord]:
        if len(word) == len(poset.elements):
            yield emit()
            return
        # iterate over a snapshot: `available` mutates during recursion
        for e in list(available):
            available.remove(e)
            newly = []
            for q in poset.upper_covers(e):
                indeg[q] -= 1
                if indeg[q] == 0:
                    newly.append(q)
            for q in newly:
                insort(available, q, key=labeling.__getitem__)
            if word:
                prefix.append(prefix[-1] + (1 if labeling[word[-1]] > labeling[e] else 0))
            else:
                prefix.append(0)
            word.append(e)
            yield from rec()
            word.pop()
            prefix.pop()
            for q in newly:
                available.remove(q)
            for q in poset.upper_covers(e):
                indeg[q] += 1
            insort(available, e, key=labeling.__getitem__)

    yield from rec()


def induced_subposet(poset: Poset, keep: Iterable[str]) -> Poset:
    """The subposet on ``keep`` with the inherited order, reduced to covers."""
    keep_set = frozenset(keep)
    for e in keep_set:
        if e not in poset._above:
            raise KeyError(f"unknown element id {e!r}")
    elements = tuple(e for e in poset.elements if e in keep_set)
    relations = [(p, q) for p in elements for q in elements if p != q and poset.leq(p, q)]
    return Poset.from_relations(elements, relations)


def restrict_marked(mp: MarkedPoset, keep: Iterable[str]) -> MarkedPoset:
    """Restrict to an element subset that contains every marked element."""
    keep_set = frozenset(keep) | mp.marked
    return MarkedPoset(induced_subposet(mp.poset, keep_set), mp.marking)
