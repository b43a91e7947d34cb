"""Exact rational polytope machinery: H/V representations and lattice counts.

Everything here is arbitrary-precision exact arithmetic; there is no
tolerance anywhere because downstream tests (facet detection, 2-levelness)
are equality tests.  Vertex enumeration is the plain basis-subset method with
rank pruning and a hard work cap: the instances this package targets are desk
scale, and a naive enumerator doubles as an auditable oracle.  The hot paths
run fraction-free on integer rows; rationals appear only at solution time.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .errors import (
    DimensionTooLarge,
    EmptyPolytope,
    UnboundedPolytope,
)

DEFAULT_SUBSET_CAP = 10**7

Point = tuple[Fraction, ...]


class LinearInequality:
    """An exact inequality ``coeffs . x <= rhs``.

    Coefficients are rescaled on construction by a positive rational so they
    become integers with gcd 1 (the direction of the inequality is never
    flipped); the right-hand side scales along and may stay fractional.
    """

    __slots__ = ("coeffs", "rhs")

    def __init__(self, coeffs: Mapping[str, int | Fraction], rhs: int | Fraction):
        exact = {c: Fraction(v) for c, v in coeffs.items() if v != 0}
        if not exact:
            raise ValueError("inequality needs at least one nonzero coefficient")
        denom_lcm = 1
        for v in exact.values():
            denom_lcm = denom_lcm * v.denominator // math.gcd(denom_lcm, v.denominator)
        ints = {c: int(v * denom_lcm) for c, v in exact.items()}
        g = 0
        for v in ints.values():
            g = math.gcd(g, v)
        self.coeffs: dict[str, int] = {c: v // g for c, v in sorted(ints.items())}
        self.rhs: Fraction = Fraction(rhs) * denom_lcm / g

    def evaluate(self, point: Mapping[str, Fraction]) -> Fraction:
        return sum((point[c] * a for c, a in self.coeffs.items()), Fraction(0))

    def key(self, coordinates: Sequence[str]) -> tuple:
        return tuple(self.coeffs.get(c, 0) for c in coordinates) + (self.rhs,)

    def negated(self) -> "LinearInequality":
        """The same hyperplane with flipped orientation (for equality rows only)."""
        return LinearInequality({c: -a for c, a in self.coeffs.items()}, -self.rhs)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, LinearInequality):
            return NotImplemented
        return self.coeffs == other.coeffs and self.rhs == other.rhs

    def __hash__(self) -> int:
        return hash((tuple(sorted(self.coeffs.items())), self.rhs))

    def __repr__(self) -> str:
        terms = " + ".join(f"{a}*{c}" for c, a in self.coeffs.items())
        return f"({terms} <= {self.rhs})"


class HRepresentation:
    """A polytope as inequalities (and optional equalities) over named coordinates.

    Inequalities are deduplicated and kept sorted by their coefficient rows,
    so two H-representations of the same system compare equal.  Equalities are
    additionally sign-normalized (first nonzero coefficient positive).
    """

    def __init__(
        self,
        coordinates: Sequence[str],
        inequalities: Iterable[LinearInequality],
        equalities: Iterable[LinearInequality] = (),
    ):
        self.coordinates: tuple[str, ...] = tuple(coordinates)
        if len(set(self.coordinates)) != len(self.coordinates):
            raise ValueError("duplicate coordinate ids")
        known = set(self.coordinates)
        ineqs = list(inequalities)
        eqs = [self._sign_normalized(e) for e in equalities]
        for row in ineqs + eqs:
            unknown = set(row.coeffs) - known
            if unknown:
                raise ValueError(f"constraint references undeclared coordinates {sorted(unknown)}")
        self.inequalities: tuple[LinearInequality, ...] = self._canonical(ineqs)
        self.equalities: tuple[LinearInequality, ...] = self._canonical(eqs)
        self._vertex_cache: VRepresentation | None = None

    def _canonical(self, rows: list[LinearInequality]) -> tuple[LinearInequality, ...]:
        unique = {row.key(self.coordinates): row for row in rows}
        return tuple(unique[k] for k in sorted(unique))

    def _sign_normalized(self, row: LinearInequality) -> LinearInequality:
        for c in self.coordinates:
            a = row.coeffs.get(c, 0)
            if a:
                return row.negated() if a < 0 else row
        return row

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, HRepresentation):
            return NotImplemented
        return (self.coordinates == other.coordinates
                and self.inequalities == other.inequalities
                and self.equalities == other.equalities)

    def __repr__(self) -> str:
        return (f"HRepresentation(coords={list(self.coordinates)!r}, "
                f"ineqs={list(self.inequalities)!r}, eqs={list(self.equalities)!r})")


@dataclass(frozen=True)
class VRepresentation:
    """A deduplicated, lexicographically sorted set of exact vertices."""

    coordinates: tuple[str, ...]
    vertices: tuple[Point, ...]

    def point_maps(self) -> list[dict[str, Fraction]]:
        return [dict(zip(self.coordinates, v)) for v in self.vertices]

    def __len__(self) -> int:
        return len(self.vertices)


def contains(h: HRepresentation, point: Mapping[str, Fraction]) -> bool:
    """Exact membership test of a named point in the polytope."""
    return (all(i.evaluate(point) <= i.rhs for i in h.inequalities)
            and all(e.evaluate(point) == e.rhs for e in h.equalities))


# ---------------------------------------------------------------------------
# fraction-free linear algebra on integer rows [a_1 .. a_d | rhs]

def _row_gcd(row: Sequence[int]) -> int:
    g = 0
    for x in row:
        g = math.gcd(g, x)
        if g == 1:
            break
    return g or 1


class _IntEchelon:
    """Incremental integer row echelon with stack discipline.

    Rows represent linear *equations* (scaling by -1 is immaterial), stored
    primitive.  Each incoming row is reduced against the stack fraction-free;
    a push succeeds only when the coefficient part stays nonzero, so stacked
    rows are independent in their coefficient columns.
    """

    def __init__(self, width: int):
        self.width = width
        self.rows: list[tuple[int, list[int]]] = []

    def residual(self, row: Sequence[int]) -> list[int]:
        r = list(row)
        for pivot, brow in self.rows:
            f = r[pivot]
            if f:
                bp = brow[pivot]
                r = [x * bp - f * y for x, y in zip(r, brow)]
        return r

    def push_residual(self, r: list[int]) -> bool:
        pivot = -1
        for j in range(self.width):
            if r[j]:
                pivot = j
                break
        if pivot < 0:
            return False
        g = _row_gcd(r)
        self.rows.append((pivot, [x // g for x in r]))
        return True

    def pop(self) -> None:
        self.rows.pop()

    @property
    def rank(self) -> int:
        return len(self.rows)

    def solve(self) -> Point:
        """Unique solution of the stacked equations; requires rank == width."""
        sol: list[Fraction] = [Fraction(0)] * self.width
        for pivot, row in sorted(self.rows, key=lambda t: -t[0]):
            acc = Fraction(row[self.width])
            for j in range(pivot + 1, self.width):
                if row[j]:
                    acc -= row[j] * sol[j]
            sol[pivot] = acc / row[pivot]
        return tuple(sol)

    def null_direction(self) -> list[Fraction] | None:
        """A nonzero kernel vector of the coefficient part; requires rank == width - 1."""
        pivots = {p for p, _ in self.rows}
        free = [j for j in range(self.width) if j not in pivots]
        if len(free) != 1:
            return None
        v: list[Fraction] = [Fraction(0)] * self.width
        v[free[0]] = Fraction(1)
        for pivot, row in sorted(self.rows, key=lambda t: -t[0]):
            acc = Fraction(0)
            for j in range(pivot + 1, self.width):
                if row[j]:
                    acc -= row[j] * v[j]
            v[pivot] = acc / row[pivot]
        return v


def _int_row(ineq: LinearInequality, coordinates: Sequence[str]) -> list[int]:
    """The constraint as an all-integer augmented row (same solution set)."""
    den = ineq.rhs.denominator
    row = [ineq.coeffs.get(c, 0) * den for c in coordinates]
    row.append(ineq.rhs.numerator)
    return row


def _int_vector(values: Sequence[Fraction]) -> list[int]:
    den = 1
    for v in values:
        den = den * v.denominator // math.gcd(den, v.denominator)
    return [int(v * den) for v in values]


def _seed_equalities(ech: _IntEchelon, eq_rows: list[list[int]]) -> None:
    for row in eq_rows:
        r = ech.residual(row)
        if not ech.push_residual(r) and r[ech.width] != 0:
            raise EmptyPolytope("inconsistent equality constraints")


def _interval_bound_certificate(h: HRepresentation) -> bool:
    """Try to certify boundedness by propagating per-coordinate intervals.

    Sound but incomplete: success proves the polyhedron bounded, failure says
    nothing.  All H-representations produced by this package certify here.
    """
    coords = h.coordinates
    if not coords:
        return True
    rows = [(i.coeffs, i.rhs) for i in h.inequalities]
    for e in h.equalities:
        rows.append((e.coeffs, e.rhs))
        neg = e.negated()
        rows.append((neg.coeffs, neg.rhs))
    lower: dict[str, Fraction | None] = {c: None for c in coords}
    upper: dict[str, Fraction | None] = {c: None for c in coords}
    for _ in range(len(coords) + 2):
        changed = False
        for coeffs, rhs in rows:
            for target, a_t in coeffs.items():
                budget = rhs
                usable = True
                for c, a in coeffs.items():
                    if c == target:
                        continue
                    bound = lower[c] if a > 0 else upper[c]
                    if bound is None:
                        usable = False
                        break
                    budget -= a * bound
                if not usable:
                    continue
                cand = budget / a_t
                if a_t > 0:
                    if upper[target] is None or cand < upper[target]:
                        upper[target] = cand
                        changed = True
                else:
                    if lower[target] is None or cand > lower[target]:
                        lower[target] = cand
                        changed = True
        if all(lower[c] is not None and upper[c] is not None for c in coords):
            return True
        if not changed:
            return False
    return False


def _reject_unbounded_by_rays(h: HRepresentation, cap: int) -> None:
    """Complete boundedness check for inputs the interval pass cannot certify.

    Detects a recession direction by enumerating candidate extreme rays of the
    homogeneous system; raises UnboundedPolytope when one exists.  A system
    whose constraint rows do not span the space is rejected as unbounded
    outright (it is unbounded whenever it is feasible).
    """
    d = len(h.coordinates)
    if d == 0:
        return
    ineq_vecs = [_int_row(i, h.coordinates)[:d] for i in h.inequalities]
    eq_vecs = [_int_row(e, h.coordinates)[:d] for e in h.equalities]
    probe = _IntEchelon(d)
    for vec in ineq_vecs + eq_vecs:
        probe.push_residual(probe.residual(vec + [0]))
    if probe.rank < d:
        raise UnboundedPolytope("constraints do not span the space; unbounded if feasible")

    def is_ray(v: list[Fraction]) -> bool:
        if all(x == 0 for x in v):
            return False
        if any(sum(a * x for a, x in zip(vec, v)) != 0 for vec in eq_vecs):
            return False
        return all(sum(a * x for a, x in zip(vec, v)) <= 0 for vec in ineq_vecs)

    ech = _IntEchelon(d)
    for vec in eq_vecs:
        ech.push_residual(ech.residual(vec + [0]))
    if ech.rank >= d - 1:
        if ech.rank == d - 1:
            v = ech.null_direction()
            if v is not None and (is_ray(v) or is_ray([-x for x in v])):
                raise UnboundedPolytope("recession direction found")
        return
    if math.comb(len(ineq_vecs), d - 1 - ech.rank) > cap:
        raise DimensionTooLarge("ray-check subset count exceeds the work cap")

    def dfs(start: int) -> bool:
        if ech.rank == d - 1:
            v = ech.null_direction()
            return v is not None and (is_ray(v) or is_ray([-x for x in v]))
        for idx in range(start, len(ineq_vecs) - (d - 1 - ech.rank) + 1):
            r = ech.residual(ineq_vecs[idx] + [0])
            if ech.push_residual(r):
                if dfs(idx + 1):
                    return True
                ech.pop()
        return False

    if dfs(0):
        raise UnboundedPolytope("recession direction found")


def enumerate_vertices(h: HRepresentation, work_cap: int | None = None) -> VRepresentation:
    """All vertices, exactly: solve every independent constraint subset and filter.

    Raises UnboundedPolytope / EmptyPolytope / DimensionTooLarge per the
    contract; results are cached on the representation.
    """
    if h._vertex_cache is not None:
        return h._vertex_cache
    cap = DEFAULT_SUBSET_CAP if work_cap is None else work_cap
    d = len(h.coordinates)
    if not _interval_bound_certificate(h):
        _reject_unbounded_by_rays(h, cap)

    ineq_rows = [_int_row(i, h.coordinates) for i in h.inequalities]
    eq_rows = [_int_row(e, h.coordinates) for e in h.equalities]
    ech = _IntEchelon(d)
    _seed_equalities(ech, eq_rows)
    need = d - ech.rank
    if math.comb(len(ineq_rows), need) > cap:
        raise DimensionTooLarge(
            f"C({len(ineq_rows)}, {need}) candidate subsets exceed the work cap {cap}")

    candidates: set[Point] = set()

    def dfs(start: int) -> None:
        if ech.rank == d:
            candidates.add(ech.solve())
            return
        remaining = d - ech.rank
        for idx in range(start, len(ineq_rows) - remaining + 1):
            r = ech.residual(ineq_rows[idx])
            if ech.push_residual(r):
                dfs(idx + 1)
                ech.pop()

    dfs(0)

    def satisfies(x: Point) -> bool:
        for row in ineq_rows:
            acc = Fraction(row[d])
            for j in range(d):
                if row[j]:
                    acc -= row[j] * x[j]
            if acc < 0:
                return False
        for row in eq_rows:
            acc = Fraction(row[d])
            for j in range(d):
                if row[j]:
                    acc -= row[j] * x[j]
            if acc != 0:
                return False
        return True

    feasible = [x for x in candidates if satisfies(x)]
    if not feasible:
        raise EmptyPolytope("no vertex satisfies all constraints")
    result = VRepresentation(h.coordinates, tuple(sorted(feasible)))
    h._vertex_cache = result
    return result


def affine_dimension(v: VRepresentation | Iterable[Point]) -> int:
    """Dimension of the affine hull of a vertex set (-1 for empty, 0 for a point)."""
    points = list(v.vertices if isinstance(v, VRepresentation) else v)
    if not points:
        return -1
    base = points[0]
    width = len(base)
    ech = _IntEchelon(width)
    for p in points[1:]:
        diff = _int_vector([p[j] - base[j] for j in range(width)])
        ech.push_residual(ech.residual(diff + [0]))
    return ech.rank


def evaluate_affine_values(v: VRepresentation, ineq: LinearInequality) -> tuple[Fraction, ...]:
    """The multiset (as a sorted tuple) of the functional's values on the vertices."""
    idx = {c: j for j, c in enumerate(v.coordinates)}
    values = []
    for p in v.vertices:
        values.append(sum((p[idx[c]] * a for c, a in ineq.coeffs.items()), Fraction(0)))
    return tuple(sorted(values))


def classify_inequalities(
    h: HRepresentation, work_cap: int | None = None
) -> tuple[VRepresentation, int, list[LinearInequality], list[LinearInequality]]:
    """Split inequalities into facets and implicit equalities via tight-vertex dimension.

    Returns (vertices, polytope dimension, facet inequalities, inequalities
    tight on every vertex).  Inequalities in neither list are redundant.
    """
    v = enumerate_vertices(h, work_cap)
    dim = affine_dimension(v)
    idx = {c: j for j, c in enumerate(v.coordinates)}
    facets: list[LinearInequality] = []
    implicit: list[LinearInequality] = []
    for ineq in h.inequalities:
        tight = []
        for p in v.vertices:
            value = sum((p[idx[c]] * a for c, a in ineq.coeffs.items()), Fraction(0))
            if value == ineq.rhs:
                tight.append(p)
        tight_dim = affine_dimension(tight)
        if tight_dim == dim:
            implicit.append(ineq)
        elif tight_dim == dim - 1 and dim >= 1:
            facets.append(ineq)
    return v, dim, facets, implicit


def irredundant(h: HRepresentation, work_cap: int | None = None) -> HRepresentation:
    """Keep exactly the facet-defining inequalities.

    Inequalities tight on every vertex describe the polytope's affine hull;
    they are moved to the equality list (only possible for degenerate input)
    so the returned representation describes the same point set.
    """
    _, _, facets, implicit = classify_inequalities(h, work_cap)
    return HRepresentation(h.coordinates, facets, list(h.equalities) + implicit)


# ---------------------------------------------------------------------------
# lattice-point counting

def _ceil_div(p: int, q: int) -> int:
    return -((-p) // q)


def count_lattice_points(h: HRepresentation, dilation: int, work_cap: int | None = None) -> int:
    """Exact number of integer points in the dilated polytope.

    Counts by recursing over the declared coordinate order; at each prefix the
    next coordinate's integer range is derived from every constraint touching
    it, relaxing still-free coordinates to their vertex box.  Every constraint
    is enforced exactly once its last coordinate is reached, so the relaxation
    only prunes.
    """
    if dilation < 0:
        raise ValueError("dilation must be nonnegative")
    v = enumerate_vertices(h, work_cap)
    if dilation == 0:
        return 1
    d = len(h.coordinates)
    if d == 0:
        return 1

    n = dilation
    rows: list[tuple[tuple[int, ...], int]] = []
    idx = {c: j for j, c in enumerate(h.coordinates)}

    def add_row(ineq: LinearInequality) -> None:
        rhs = ineq.rhs * n
        coeffs = [0] * d
        for c, a in ineq.coeffs.items():
            coeffs[idx[c]] = a * rhs.denominator
        rows.append((tuple(coeffs), rhs.numerator))

    for ineq in h.inequalities:
        add_row(ineq)
    for eq in h.equalities:
        add_row(eq)
        add_row(eq.negated())

    box_lo = []
    box_hi = []
    for j in range(d):
        values = [p[j] for p in v.vertices]
        lo, hi = min(values) * n, max(values) * n
        box_lo.append(_ceil_div(lo.numerator, lo.denominator))
        box_hi.append(hi.numerator // hi.denominator)
        if box_lo[j] > box_hi[j]:
            return 0

    # suffix[r][i]: minimal contribution of coordinates >= i to row r, by box
    suffix: list[list[int]] = []
    touch: list[list[tuple[int, int]]] = [[] for _ in range(d)]
    for r, (coeffs, _) in enumerate(rows):
        acc = [0] * (d + 1)
        for j in range(d - 1, -1, -1):
            a = coeffs[j]
            contrib = min(a * box_lo[j], a * box_hi[j]) if a else 0
            acc[j] = acc[j + 1] + contrib
        suffix.append(acc)
        for j in range(d):
            if coeffs[j]:
                touch[j].append((r, coeffs[j]))

    slack = [rhs for _, rhs in rows]

    def rec(i: int) -> int:
        lo, hi = box_lo[i], box_hi[i]
        for r, a in touch[i]:
            budget = slack[r] - suffix[r][i + 1]
            if a > 0:
                bound = budget // a
                if bound < hi:
                    hi = bound
            else:
                bound = _ceil_div(-budget, -a)
                if bound > lo:
                    lo = bound
            if lo > hi:
                return 0
        if i == d - 1:
            return hi - lo + 1
        total = 0
        for t in range(lo, hi + 1):
            for r, a in touch[i]:
                slack[r] -= a * t
            total += rec(i + 1)
            for r, a in touch[i]:
                slack[r] += a * t
        return total

    return rec(0)


# ---------------------------------------------------------------------------
# univariate polynomials over Q

@dataclass(frozen=True)
class UnivariatePolynomial:
    """A rational polynomial in the dilation variable, constant term first."""

    coefficients: tuple[Fraction, ...]

    def __post_init__(self):
        coeffs = tuple(Fraction(c) for c in self.coefficients)
        while coeffs and coeffs[-1] == 0:
            coeffs = coeffs[:-1]
        object.__setattr__(self, "coefficients", coeffs)

    @property
    def degree(self) -> int:
        return len(self.coefficients) - 1

    def evaluate(self, x: int | Fraction) -> Fraction:
        acc = Fraction(0)
        for c in reversed(self.coefficients):
            acc = acc * x + c
        return acc

    def __add__(self, other: "UnivariatePolynomial") -> "UnivariatePolynomial":
        width = max(len(self.coefficients), len(other.coefficients))
        a = list(self.coefficients) + [Fraction(0)] * (width - len(self.coefficients))
        b = list(other.coefficients) + [Fraction(0)] * (width - len(other.coefficients))
        return UnivariatePolynomial(tuple(x + y for x, y in zip(a, b)))

    def __mul__(self, other: "UnivariatePolynomial | int | Fraction") -> "UnivariatePolynomial":
        if isinstance(other, (int, Fraction)):
            return UnivariatePolynomial(tuple(c * other for c in self.coefficients))
        if not self.coefficients or not other.coefficients:
            return ZERO_POLYNOMIAL
        out = [Fraction(0)] * (len(self.coefficients) + len(other.coefficients) - 1)
        for i, a in enumerate(self.coefficients):
            if a:
                for j, b in enumerate(other.coefficients):
                    if b:
                        out[i + j] += a * b
        return UnivariatePolynomial(tuple(out))

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "UnivariatePolynomial":
        result = UnivariatePolynomial((Fraction(1),))
        for _ in range(k):
            result = result * self
        return result

    def __str__(self) -> str:
        if not self.coefficients:
            return "0"
        return ", ".join(str(c) for c in self.coefficients)


ZERO_POLYNOMIAL = UnivariatePolynomial(())
ONE_POLYNOMIAL = UnivariatePolynomial((Fraction(1),))


def polynomial(coeffs: Iterable[int | Fraction]) -> UnivariatePolynomial:
    return UnivariatePolynomial(tuple(Fraction(c) for c in coeffs))


def interpolate_polynomial(points: Sequence[tuple[int, int | Fraction]]) -> UnivariatePolynomial:
    """The unique rational polynomial through the points (exact Lagrange)."""
    xs = [x for x, _ in points]
    if len(set(xs)) != len(xs):
        raise ValueError("duplicate abscissae")
    result = ZERO_POLYNOMIAL
    for i, (xi, yi) in enumerate(points):
        term = UnivariatePolynomial((Fraction(yi),))
        for j, (xj, _) in enumerate(points):
            if i == j:
                continue
            term = term * UnivariatePolynomial((Fraction(-xj, 1), Fraction(1)))
            term = term * Fraction(1, xi - xj)
        result = result + term
    return result


# ---------------------------------------------------------------------------
# exact affine images (used by invariance tests and the corpus harness)

def invert_matrix(matrix: Sequence[Sequence[int | Fraction]]) -> list[list[Fraction]]:
    d = len(matrix)
    aug = [[Fraction(matrix[i][j]) for j in range(d)]
           + [Fraction(1 if j == i else 0) for j in range(d)] for i in range(d)]
    for col in range(d):
        pivot = next((r for r in range(col, d) if aug[r][col] != 0), None)
        if pivot is None:
            raise ValueError("matrix is singular")
        aug[col], aug[pivot] = aug[pivot], aug[col]
        lead = aug[col][col]
        aug[col] = [x / lead for x in aug[col]]
        for r in range(d):
            if r != col and aug[r][col]:
                f = aug[r][col]
                aug[r] = [x - f * y for x, y in zip(aug[r], aug[col])]
    return [row[d:] for row in aug]


def affine_image(
    h: HRepresentation,
    matrix: Sequence[Sequence[int | Fraction]],
    shift: Sequence[int | Fraction],
) -> HRepresentation:
    """The H-representation of {M x + t : x in P} for invertible M."""
    d = len(h.coordinates)
    inv = invert_matrix(matrix)
    t = [Fraction(s) for s in shift]

    def transform(row: LinearInequality) -> LinearInequality:
        a = [Fraction(row.coeffs.get(c, 0)) for c in h.coordinates]
        new_a = [sum(a[i] * inv[i][j] for i in range(d)) for j in range(d)]
        offset = sum(new_a[j] * t[j] for j in range(d))
        return LinearInequality(dict(zip(h.coordinates, new_a)), row.rhs + offset)

    return HRepresentation(
        h.coordinates,
        [transform(i) for i in h.inequalities],
        [transform(e) for e in h.equalities],
    )
