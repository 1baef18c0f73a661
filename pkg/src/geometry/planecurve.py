"""
Tropical plane curves V(f) of bivariate Laurent polynomials.

The corner locus is assembled from two-term ties: for each pair of terms the
tie line is clipped to the interval where those two terms dominate every
other term, giving a bounded edge, a ray, a full line or nothing.
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import networkx as nx

from ..algebra.freemod import TropPolynomial
from ..algebra.semifield import TropScalar
from ..errors import (
    DegenerateCurve,
    DuplicateExponent,
    EmptyPolynomial,
    InternalVerificationFailed,
    InvalidInput,
    LengthMismatch,
)

logger = logging.getLogger(__name__)

Direction = Tuple[int, int]


@dataclass(frozen=True, order=True)
class PlanePoint:
    x: Fraction
    y: Fraction

    def __post_init__(self):
        try:
            object.__setattr__(self, "x", Fraction(self.x))
            object.__setattr__(self, "y", Fraction(self.y))
        except (TypeError, ValueError, ZeroDivisionError):
            raise InvalidInput(f"Plane points need rational coordinates, got ({self.x!r}, {self.y!r})")

    def moved(self, direction: Direction, t: Fraction) -> "PlanePoint":
        return PlanePoint(self.x + t * direction[0], self.y + t * direction[1])

    def __str__(self) -> str:
        return f"({self.x}, {self.y})"


@dataclass(frozen=True)
class SkeletonEdge:
    """Bounded edge between two vertex indices, direction primitive from start to end."""

    start: int
    end: int
    direction: Direction
    multiplicity: int


@dataclass(frozen=True)
class SkeletonRay:
    vertex: int
    direction: Direction
    multiplicity: int


@dataclass(frozen=True)
class SkeletonLine:
    point: PlanePoint
    direction: Direction
    multiplicity: int


@dataclass(frozen=True)
class Skeleton:
    vertices: Tuple[PlanePoint, ...] = ()
    bounded_edges: Tuple[SkeletonEdge, ...] = ()
    rays: Tuple[SkeletonRay, ...] = ()
    lines: Tuple[SkeletonLine, ...] = ()

    @property
    def is_empty(self) -> bool:
        return not (self.vertices or self.lines)

    def germs(self, vertex: int) -> List[Tuple[Direction, int]]:
        """Outgoing (direction, multiplicity) pairs at a vertex."""
        found = []
        for e in self.bounded_edges:
            if e.start == vertex:
                found.append((e.direction, e.multiplicity))
            if e.end == vertex:
                found.append(((-e.direction[0], -e.direction[1]), e.multiplicity))
        for r in self.rays:
            if r.vertex == vertex:
                found.append((r.direction, r.multiplicity))
        return found

    def sample_points(self) -> Tuple[PlanePoint, ...]:
        """One interior point on every edge, ray and line."""
        points = []
        for e in self.bounded_edges:
            a, b = self.vertices[e.start], self.vertices[e.end]
            points.append(PlanePoint((a.x + b.x) / 2, (a.y + b.y) / 2))
        for r in self.rays:
            points.append(self.vertices[r.vertex].moved(r.direction, Fraction(1)))
        points.extend(line.point for line in self.lines)
        return tuple(points)


def _check_plane(f: TropPolynomial) -> None:
    if f.nvars != 2:
        raise LengthMismatch(f"Plane curves need 2 variables, got {f.nvars}")
    if not len(f):
        raise EmptyPolynomial("The polynomial has no terms")


def _term_values(f: TropPolynomial, p: PlanePoint) -> List[Fraction]:
    return [c.value + a * p.x + b * p.y for (a, b), c in f.terms]


def maximal_terms(f: TropPolynomial, p: PlanePoint) -> int:
    """Number of terms attaining the maximum at p."""
    _check_plane(f)
    values = _term_values(f, p)
    top = max(values)
    return sum(1 for v in values if v == top)


def on_curve(f: TropPolynomial, p: PlanePoint) -> bool:
    return maximal_terms(f, p) >= 2


def _primitive(dx: int, dy: int) -> Tuple[Direction, int]:
    g = gcd(abs(dx), abs(dy))
    return (dx // g, dy // g), g


def _dominance_interval(
    f: TropPolynomial, k: int, p0: PlanePoint, direction: Direction
) -> Optional[Tuple[Optional[Fraction], Optional[Fraction]]]:
    """Parameters t with term k maximal at p0 + t·direction, or None when empty."""
    (ak, bk), ck = f.terms[k]
    lo: Optional[Fraction] = None
    hi: Optional[Fraction] = None
    for m, ((am, bm), cm) in enumerate(f.terms):
        if m == k:
            continue
        da, db = ak - am, bk - bm
        rate = da * direction[0] + db * direction[1]
        gap = da * p0.x + db * p0.y + ck.value - cm.value
        if rate == 0:
            if gap < 0:
                return None
            continue
        bound = -gap / rate
        if rate > 0:
            lo = bound if lo is None else max(lo, bound)
        else:
            hi = bound if hi is None else min(hi, bound)
    if lo is not None and hi is not None and lo > hi:
        return None
    return lo, hi


def skeleton(f: TropPolynomial) -> Skeleton:
    """Vertices, bounded edges, rays and lines of V(f), balancing checked."""
    _check_plane(f)
    terms = f.terms
    vertex_index: Dict[PlanePoint, int] = {}
    pieces = []

    def vertex(p: PlanePoint) -> int:
        return vertex_index.setdefault(p, len(vertex_index))

    for k in range(len(terms)):
        for j in range(k + 1, len(terms)):
            (ak, bk), ck = terms[k]
            (aj, bj), cj = terms[j]
            dx, dy = ak - aj, bk - bj
            norm = dx * dx + dy * dy
            shift = (cj.value - ck.value) / norm
            p0 = PlanePoint(dx * shift, dy * shift)
            direction, multiplicity = _primitive(-dy, dx)
            interval = _dominance_interval(f, k, p0, direction)
            if interval is None:
                continue
            lo, hi = interval
            if lo is not None and hi is not None and lo == hi:
                continue
            if lo is not None and hi is not None:
                probe = (lo + hi) / 2
            elif lo is not None:
                probe = lo + 1
            elif hi is not None:
                probe = hi - 1
            else:
                probe = Fraction(0)
            if maximal_terms(f, p0.moved(direction, probe)) != 2:
                raise DegenerateCurve(
                    f"Terms {terms[k][0]} and {terms[j][0]} tie along a segment shared with another term",
                    {"terms": [list(terms[k][0]), list(terms[j][0])]},
                )
            pieces.append((p0, direction, multiplicity, lo, hi))

    edges, rays, lines = [], [], []
    for p0, direction, multiplicity, lo, hi in pieces:
        if lo is not None and hi is not None:
            a, b = vertex(p0.moved(direction, lo)), vertex(p0.moved(direction, hi))
            edges.append((a, b, direction, multiplicity))
        elif lo is not None:
            rays.append((vertex(p0.moved(direction, lo)), direction, multiplicity))
        elif hi is not None:
            rays.append((vertex(p0.moved(direction, hi)), (-direction[0], -direction[1]), multiplicity))
        else:
            lines.append(SkeletonLine(p0, direction, multiplicity))

    # vertices are numbered in sorted order
    ordered = sorted(vertex_index)
    renumber = {vertex_index[p]: i for i, p in enumerate(ordered)}
    result = Skeleton(
        tuple(ordered),
        tuple(sorted(
            (SkeletonEdge(*_oriented(renumber[a], renumber[b], d), m) for a, b, d, m in edges),
            key=lambda e: (e.start, e.end, e.direction),
        )),
        tuple(sorted((SkeletonRay(renumber[v], d, m) for v, d, m in rays), key=_ray_key)),
        tuple(sorted(lines, key=lambda line: (line.point, line.direction))),
    )
    for i in range(len(result.vertices)):
        if balancing_defect(result, i) != (0, 0):
            raise InternalVerificationFailed(f"Vertex {result.vertices[i]} is not balanced")
    logger.debug(
        "skeleton: %d vertices, %d edges, %d rays, %d lines",
        len(result.vertices), len(result.bounded_edges), len(result.rays), len(result.lines),
    )
    return result


def _oriented(a: int, b: int, direction: Direction) -> Tuple[int, int, Direction]:
    if a <= b:
        return a, b, direction
    return b, a, (-direction[0], -direction[1])


def _ray_key(ray: SkeletonRay) -> Tuple:
    return ray.vertex, ray.direction


def balancing_defect(sk: Skeleton, vertex: int) -> Direction:
    """Σ multiplicity · direction over the germs at a vertex."""
    x = sum(m * d[0] for d, m in sk.germs(vertex))
    y = sum(m * d[1] for d, m in sk.germs(vertex))
    return x, y


def betti1(sk: Skeleton) -> int:
    """Cycle rank of the bounded part: |E| - |V| + components."""
    if not sk.vertices:
        return 0
    graph = nx.MultiGraph()
    graph.add_nodes_from(range(len(sk.vertices)))
    graph.add_edges_from((e.start, e.end) for e in sk.bounded_edges)
    return graph.number_of_edges() - graph.number_of_nodes() + nx.number_connected_components(graph)


def tropicalize(terms: Iterable[Tuple[Sequence[int], Fraction]]) -> TropPolynomial:
    """⊕ -val(c_ij) ⊙ x^i y^j from (exponent, valuation) pairs."""
    seen = set()
    collected = []
    for exponent, valuation in terms:
        key = tuple(int(e) for e in exponent)
        if len(key) != 2:
            raise LengthMismatch(f"Exponent {key} is not a pair")
        if key in seen:
            raise DuplicateExponent(f"Exponent {key} appears twice", {"exponent": list(key)})
        seen.add(key)
        collected.append((key, TropScalar(-Fraction(valuation))))
    return TropPolynomial(2, tuple(collected))


def product_family(r: int, s: int) -> TropPolynomial:
    """f1 ⊙ f2 with f1 = ⊕_k (-k²) x^k and f2 = ⊕_j (-j²) y^j; V is a grid of r by s lines."""
    if r < 1 or s < 1:
        raise InvalidInput("Both degrees must be positive")
    f1 = TropPolynomial(2, tuple(((k, 0), -k * k) for k in range(r + 1)))
    f2 = TropPolynomial(2, tuple(((0, j), -j * j) for j in range(s + 1)))
    return f1 * f2
