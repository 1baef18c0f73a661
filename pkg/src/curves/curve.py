"""
Tropical curves as metric graphs, piecewise-linear functions with integer
slopes, divisors, and the section-module machinery built on them.

Edge points are (edge, offset) pairs with exact rational offsets measured
from the tail vertex. Rays have a tail vertex only and extend to infinity.
``f + g`` is the pointwise max of two functions and ``f * g`` their
pointwise sum; ord(f, P) is the sum of outgoing slopes of f at P.
"""

import logging
from bisect import bisect_left, bisect_right
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple, Union

import networkx as nx
import numpy as np

from ..algebra.freemod import TropPolynomial, TropVector
from ..algebra.matrix import DichotomyCertificate, TropMatrix, delta, ff4_solve, mat_apply
from ..algebra.semifield import NEG_INF, TropScalar, mul
from ..algebra.submod import Submodule
from ..errors import (
    BottomFunction,
    InternalVerificationFailed,
    InvalidInput,
    NotASection,
    PointOffGraph,
    PreconditionFailed,
)

logger = logging.getLogger(__name__)

RationalLike = Union[int, Fraction, str]


def _rational(value: RationalLike) -> Fraction:
    try:
        return Fraction(value)
    except (TypeError, ValueError, ZeroDivisionError):
        raise InvalidInput(f"Not a rational number: {value!r}")


@dataclass(frozen=True)
class Edge:
    """Bounded edge tail → head of positive length, or a ray from tail (head and length None)."""

    name: str
    tail: str
    head: Optional[str] = None
    length: Optional[Fraction] = None

    def __post_init__(self):
        if self.head is None:
            if self.length is not None:
                raise InvalidInput(f"Ray {self.name} cannot have a length")
            return
        if self.length is None:
            raise InvalidInput(f"Edge {self.name} needs a length")
        length = _rational(self.length)
        if length <= 0:
            raise InvalidInput(f"Edge {self.name} has non-positive length {length}")
        object.__setattr__(self, "length", length)

    @property
    def is_ray(self) -> bool:
        return self.head is None

    @property
    def is_loop(self) -> bool:
        return self.head == self.tail


@dataclass(frozen=True)
class CurvePoint:
    """A vertex, or an interior point (edge, offset) of an edge."""

    vertex: Optional[str] = None
    edge: Optional[str] = None
    offset: Optional[Fraction] = None

    def __post_init__(self):
        if (self.vertex is None) == (self.edge is None):
            raise InvalidInput("A curve point is either a vertex or an edge point")
        if self.edge is not None:
            if self.offset is None:
                raise InvalidInput(f"Edge point on {self.edge} needs an offset")
            object.__setattr__(self, "offset", _rational(self.offset))
        elif self.offset is not None:
            raise InvalidInput("Vertex points carry no offset")

    @classmethod
    def at(cls, vertex: str) -> "CurvePoint":
        return cls(vertex=vertex)

    @classmethod
    def on(cls, edge: str, offset: RationalLike) -> "CurvePoint":
        return cls(edge=edge, offset=_rational(offset))

    @property
    def is_vertex(self) -> bool:
        return self.vertex is not None

    def sort_key(self) -> Tuple:
        if self.vertex is not None:
            return (0, self.vertex, Fraction(0))
        return (1, self.edge, self.offset)

    def __str__(self) -> str:
        return self.vertex if self.vertex is not None else f"{self.edge}@{self.offset}"


@dataclass(frozen=True)
class MetricGraph:
    vertices: Tuple[str, ...]
    edges: Tuple[Edge, ...]

    def __post_init__(self):
        vertices = tuple(self.vertices)
        edges = tuple(self.edges)
        if len(set(vertices)) != len(vertices) or not vertices:
            raise InvalidInput("Vertex names must be unique and non-empty")
        if not edges:
            raise InvalidInput("A curve needs at least one edge")
        if len({e.name for e in edges}) != len(edges):
            raise InvalidInput("Edge names must be unique")
        known = set(vertices)
        for e in edges:
            if e.tail not in known or (e.head is not None and e.head not in known):
                raise InvalidInput(f"Edge {e.name} has an unknown endpoint")
        object.__setattr__(self, "vertices", vertices)
        object.__setattr__(self, "edges", edges)
        if not nx.is_connected(self.to_networkx()):
            raise InvalidInput("The metric graph must be connected")

    def to_networkx(self) -> nx.MultiGraph:
        graph = nx.MultiGraph()
        graph.add_nodes_from(self.vertices)
        for e in self.edges:
            if not e.is_ray:
                graph.add_edge(e.tail, e.head, key=e.name, length=e.length)
        return graph

    @property
    def is_compact(self) -> bool:
        return not any(e.is_ray for e in self.edges)

    def edge(self, name: str) -> Edge:
        for e in self.edges:
            if e.name == name:
                return e
        raise PointOffGraph(f"Unknown edge {name}")

    def germs(self, vertex: str) -> List[Tuple[Edge, bool]]:
        """Edge ends at a vertex as (edge, at_tail); a loop contributes both ends."""
        found = []
        for e in self.edges:
            if e.tail == vertex:
                found.append((e, True))
            if e.head == vertex:
                found.append((e, False))
        return found

    def canonical(self, point: CurvePoint) -> CurvePoint:
        """Validate a point and rewrite edge endpoints as vertices."""
        if point.is_vertex:
            if point.vertex not in self.vertices:
                raise PointOffGraph(f"Unknown vertex {point.vertex}")
            return point
        e = self.edge(point.edge)
        if point.offset < 0 or (e.length is not None and point.offset > e.length):
            raise PointOffGraph(f"Offset {point.offset} is outside edge {e.name}")
        if point.offset == 0:
            return CurvePoint.at(e.tail)
        if e.length is not None and point.offset == e.length:
            return CurvePoint.at(e.head)
        return point


@dataclass(frozen=True)
class EdgeFunction:
    """Piecewise-linear function on one edge: knots (offset, value) from offset 0,
    integer slopes between knots, and a tail slope past the last knot on rays."""

    knots: Tuple[Tuple[Fraction, Fraction], ...]
    tail_slope: Optional[int] = None

    def __post_init__(self):
        knots = [(_rational(t), _rational(y)) for t, y in self.knots]
        if not knots or knots[0][0] != 0:
            raise InvalidInput("Edge data must start at offset 0")
        for (t0, _), (t1, _) in zip(knots, knots[1:]):
            if t1 <= t0:
                raise InvalidInput("Knot offsets must be strictly increasing")
        slopes = [_segment_slope(a, b) for a, b in zip(knots, knots[1:])]
        tail = None if self.tail_slope is None else int(self.tail_slope)
        if self.tail_slope is not None and tail != self.tail_slope:
            raise InvalidInput(f"Tail slope {self.tail_slope} is not an integer")

        kept = [knots[0]]
        for k in range(1, len(knots) - 1):
            if slopes[k - 1] != slopes[k]:
                kept.append(knots[k])
        if len(knots) > 1 and not (tail is not None and tail == slopes[-1]):
            kept.append(knots[-1])
        object.__setattr__(self, "knots", tuple(kept))
        object.__setattr__(self, "tail_slope", tail)

    @property
    def end(self) -> Fraction:
        return self.knots[-1][0]

    @property
    def offsets(self) -> List[Fraction]:
        return [t for t, _ in self.knots]

    def slopes(self) -> List[int]:
        return [_segment_slope(a, b) for a, b in zip(self.knots, self.knots[1:])]

    def value_at(self, t: Fraction) -> Fraction:
        offsets = self.offsets
        if t < 0:
            raise PointOffGraph(f"Negative offset {t}")
        if t >= self.end:
            if t == self.end:
                return self.knots[-1][1]
            if self.tail_slope is None:
                raise PointOffGraph(f"Offset {t} beyond edge end {self.end}")
            return self.knots[-1][1] + self.tail_slope * (t - self.end)
        k = bisect_right(offsets, t) - 1
        (t0, y0), (t1, y1) = self.knots[k], self.knots[k + 1]
        return y0 + (y1 - y0) * (t - t0) / (t1 - t0)

    def slope_right(self, t: Fraction) -> int:
        if t >= self.end:
            if self.tail_slope is None:
                raise PointOffGraph(f"No outgoing direction past offset {self.end}")
            return self.tail_slope
        return self.slopes()[bisect_right(self.offsets, t) - 1]

    def slope_left(self, t: Fraction) -> int:
        if t <= 0:
            raise PointOffGraph("No incoming direction at offset 0")
        if t > self.end:
            return self.tail_slope
        return self.slopes()[bisect_left(self.offsets, t) - 1]

    def breakpoints(self, length: Optional[Fraction]) -> List[Fraction]:
        """Interior offsets where the slope changes."""
        return [t for t, _ in self.knots if t > 0 and (length is None or t < length)]

    def shifted(self, c: Fraction) -> "EdgeFunction":
        return EdgeFunction(tuple((t, y + c) for t, y in self.knots), self.tail_slope)


def _segment_slope(a: Tuple[Fraction, Fraction], b: Tuple[Fraction, Fraction]) -> int:
    slope = (b[1] - a[1]) / (b[0] - a[0])
    if slope.denominator != 1:
        raise InvalidInput(f"Slope {slope} between offsets {a[0]} and {b[0]} is not an integer")
    return int(slope)


def _merged_offsets(f: EdgeFunction, g: EdgeFunction) -> List[Fraction]:
    return sorted(set(f.offsets) | set(g.offsets))


def _sum_pieces(f: EdgeFunction, g: EdgeFunction) -> EdgeFunction:
    knots = tuple((t, f.value_at(t) + g.value_at(t)) for t in _merged_offsets(f, g))
    tail = None if f.tail_slope is None else f.tail_slope + g.tail_slope
    return EdgeFunction(knots, tail)


def _join_pieces(f: EdgeFunction, g: EdgeFunction) -> EdgeFunction:
    offsets = _merged_offsets(f, g)
    points = set(offsets)
    for a, b in zip(offsets, offsets[1:]):
        da, db = f.value_at(a) - g.value_at(a), f.value_at(b) - g.value_at(b)
        if da * db < 0:
            points.add(a + (b - a) * da / (da - db))
    if f.tail_slope is not None:
        last = offsets[-1]
        gap = f.value_at(last) - g.value_at(last)
        rate = f.tail_slope - g.tail_slope
        if gap * rate < 0:
            points.add(last - gap / rate)
    knots = tuple((t, max(f.value_at(t), g.value_at(t))) for t in sorted(points))
    tail = None if f.tail_slope is None else max(f.tail_slope, g.tail_slope)
    return EdgeFunction(knots, tail)


@dataclass(frozen=True)
class RationalFunction:
    """Continuous piecewise-linear function on a metric graph, or the constant -inf."""

    graph: MetricGraph
    pieces: Tuple[Tuple[str, EdgeFunction], ...] = ()
    is_bottom: bool = False

    def __post_init__(self):
        if self.is_bottom:
            if self.pieces:
                raise InvalidInput("The -inf function carries no edge data")
            return
        pieces = dict(self.pieces)
        names = {e.name for e in self.graph.edges}
        if set(pieces) != names:
            raise InvalidInput(f"Function data must cover exactly the edges {sorted(names)}")
        for e in self.graph.edges:
            piece = pieces[e.name]
            if e.is_ray and piece.tail_slope is None:
                raise InvalidInput(f"Ray {e.name} needs a tail slope")
            if not e.is_ray and (piece.tail_slope is not None or piece.end != e.length):
                raise InvalidInput(f"Data on {e.name} must end exactly at its length {e.length}")
        object.__setattr__(self, "pieces", tuple(sorted(pieces.items())))
        for v in self.graph.vertices:
            values = {self._end_value(e, at_tail) for e, at_tail in self.graph.germs(v)}
            if len(values) > 1:
                raise InvalidInput(f"Function is discontinuous at vertex {v}")

    @classmethod
    def bottom(cls, graph: MetricGraph) -> "RationalFunction":
        return cls(graph, (), True)

    @classmethod
    def constant(cls, graph: MetricGraph, c: RationalLike = 0) -> "RationalFunction":
        c = _rational(c)
        pieces = []
        for e in graph.edges:
            if e.is_ray:
                pieces.append((e.name, EdgeFunction(((Fraction(0), c),), 0)))
            else:
                pieces.append((e.name, EdgeFunction(((Fraction(0), c), (e.length, c)))))
        return cls(graph, tuple(pieces))

    @classmethod
    def from_pieces(cls, graph: MetricGraph, pieces: Mapping[str, EdgeFunction]) -> "RationalFunction":
        return cls(graph, tuple(pieces.items()))

    def piece(self, edge: str) -> EdgeFunction:
        return dict(self.pieces)[edge]

    def _end_value(self, e: Edge, at_tail: bool) -> Fraction:
        piece = self.piece(e.name)
        return piece.knots[0][1] if at_tail else piece.value_at(e.length)

    def evaluate(self, point: CurvePoint) -> TropScalar:
        point = self.graph.canonical(point)
        if self.is_bottom:
            return NEG_INF
        if point.is_vertex:
            e, at_tail = self.graph.germs(point.vertex)[0]
            return TropScalar(self._end_value(e, at_tail))
        return TropScalar(self.piece(point.edge).value_at(point.offset))

    def order(self, point: CurvePoint) -> int:
        """Sum of the outgoing slopes at the point."""
        if self.is_bottom:
            raise BottomFunction("ord is not defined for the -inf function")
        point = self.graph.canonical(point)
        if point.is_vertex:
            total = 0
            for e, at_tail in self.graph.germs(point.vertex):
                piece = self.piece(e.name)
                total += piece.slope_right(Fraction(0)) if at_tail else -piece.slope_left(e.length)
            return total
        piece = self.piece(point.edge)
        return piece.slope_right(point.offset) - piece.slope_left(point.offset)

    def breakpoints(self) -> Tuple[CurvePoint, ...]:
        if self.is_bottom:
            return ()
        found = []
        for e in self.graph.edges:
            for t in self.piece(e.name).breakpoints(e.length):
                found.append(CurvePoint.on(e.name, t))
        return tuple(found)

    def _combine(self, other: "RationalFunction", how) -> "RationalFunction":
        if other.graph != self.graph:
            raise InvalidInput("Functions live on different graphs")
        pieces = tuple((name, how(piece, other.piece(name))) for name, piece in self.pieces)
        return RationalFunction(self.graph, pieces)

    def __add__(self, other: "RationalFunction") -> "RationalFunction":
        if self.is_bottom:
            return other
        if other.is_bottom:
            return self
        return self._combine(other, _join_pieces)

    def __mul__(self, other: "RationalFunction") -> "RationalFunction":
        if self.is_bottom or other.is_bottom:
            return RationalFunction.bottom(self.graph)
        return self._combine(other, _sum_pieces)

    def shift(self, a: TropScalar) -> "RationalFunction":
        """a ⊙ f."""
        a = TropScalar.of(a)
        if self.is_bottom or a.is_neg_inf:
            return RationalFunction.bottom(self.graph)
        return RationalFunction(self.graph, tuple((n, p.shifted(a.value)) for n, p in self.pieces))


@dataclass(frozen=True)
class Divisor:
    """Finite integer combination of curve points."""

    entries: Tuple[Tuple[CurvePoint, int], ...] = ()

    def __post_init__(self):
        totals: Dict[CurvePoint, int] = {}
        for point, mult in self.entries:
            if int(mult) != mult:
                raise InvalidInput(f"Multiplicity {mult} is not an integer")
            totals[point] = totals.get(point, 0) + int(mult)
        cleaned = sorted(((p, m) for p, m in totals.items() if m != 0), key=lambda item: item[0].sort_key())
        object.__setattr__(self, "entries", tuple(cleaned))

    @classmethod
    def of(cls, weights: Union[Mapping[CurvePoint, int], Iterable[Tuple[CurvePoint, int]]]) -> "Divisor":
        items = weights.items() if isinstance(weights, Mapping) else weights
        return cls(tuple(items))

    @classmethod
    def point(cls, p: CurvePoint, mult: int = 1) -> "Divisor":
        return cls(((p, mult),))

    def __getitem__(self, point: CurvePoint) -> int:
        return dict(self.entries).get(point, 0)

    @property
    def support(self) -> Tuple[CurvePoint, ...]:
        return tuple(p for p, _ in self.entries)

    @property
    def degree(self) -> int:
        return sum(m for _, m in self.entries)

    def is_effective(self) -> bool:
        return all(m > 0 for _, m in self.entries)

    def __add__(self, other: "Divisor") -> "Divisor":
        return Divisor(self.entries + other.entries)

    def __neg__(self) -> "Divisor":
        return Divisor(tuple((p, -m) for p, m in self.entries))

    def __sub__(self, other: "Divisor") -> "Divisor":
        return self + (-other)

    def canonical_on(self, graph: MetricGraph) -> "Divisor":
        return Divisor(tuple((graph.canonical(p), m) for p, m in self.entries))


def principal_divisor(f: RationalFunction) -> Divisor:
    """(f) = Σ ord(f, P) P over vertices and breakpoints."""
    if f.is_bottom:
        raise BottomFunction("The -inf function has no divisor")
    candidates = [CurvePoint.at(v) for v in f.graph.vertices] + list(f.breakpoints())
    return Divisor(tuple((p, f.order(p)) for p in candidates))


def is_section(f: RationalFunction, D: Divisor) -> bool:
    """f = -inf or (f) + D ≥ 0."""
    if f.is_bottom:
        return True
    D = D.canonical_on(f.graph)
    points = set(principal_divisor(f).support) | set(D.support)
    return all(f.order(p) + D[p] >= 0 for p in points)


def tropical_combination(coeffs: Sequence[TropScalar], functions: Sequence[RationalFunction]) -> RationalFunction:
    """⊕_j a_j ⊙ f_j."""
    if not functions:
        raise InvalidInput("Need at least one function")
    result = RationalFunction.bottom(functions[0].graph)
    for a, f in zip(coeffs, functions):
        result = result + f.shift(a)
    return result


def module_closure_check(
    sections: Sequence[RationalFunction],
    D: Divisor,
    samples: int = 25,
    rng: Optional[np.random.Generator] = None,
) -> bool:
    """Random tropical combinations of sections of D stay sections of D."""
    for index, f in enumerate(sections):
        if not is_section(f, D):
            raise NotASection(f"Function {index} is not a section of the divisor", {"index": index})
    rng = rng if rng is not None else np.random.default_rng(0)
    for _ in range(samples):
        raw = rng.integers(-4, 5, size=len(sections))
        dropped = rng.random(len(sections)) < 0.25
        coeffs = [NEG_INF if off else TropScalar(Fraction(int(c), 2)) for c, off in zip(raw, dropped)]
        if not is_section(tropical_combination(coeffs, sections), D):
            return False
    return True


@dataclass(frozen=True)
class SectionWitness:
    """Case II outcome: α(v) is a section of D - E."""

    v: TropVector
    function: RationalFunction
    off_diagonal: Tuple[int, ...]
    residual: Divisor
    certificate: DichotomyCertificate
    matrix: TropMatrix


@dataclass(frozen=True)
class BoxModule:
    """Case I outcome: the box module L(v, ε) on which A acts diagonally."""

    v: TropVector
    epsilon: TropScalar
    module: Submodule
    dimension: int
    acts_diagonally: bool
    images: Tuple[RationalFunction, ...] = field(default=())
    certificate: Optional[DichotomyCertificate] = None
    matrix: Optional[TropMatrix] = None


def box_generators(v: TropVector, epsilon: TropScalar) -> Tuple[TropVector, ...]:
    """Extremal rays of L(v, ε): h_i raises coordinate i of v by ε."""
    return tuple(
        TropVector(tuple(mul(x, epsilon) if j == i else x for j, x in enumerate(v)))
        for i in range(len(v))
    )


def box_module(v: TropVector, epsilon: TropScalar) -> Submodule:
    if not v.is_interior or not epsilon > TropScalar(0):
        raise InvalidInput("A box needs a finite corner and ε > 0")
    return Submodule(len(v), box_generators(v, epsilon))


def fe7_construct(
    sections: Sequence[RationalFunction],
    points: Sequence[CurvePoint],
    D: Divisor,
) -> Union[SectionWitness, BoxModule]:
    """Evaluate sections at points, solve the dichotomy and certify its outcome."""
    m = len(sections)
    if m == 0 or len(points) != m:
        raise PreconditionFailed("Need as many points as sections, at least one")
    graph = sections[0].graph
    if any(f.graph != graph for f in sections):
        raise PreconditionFailed("Sections live on different graphs")
    points = [graph.canonical(p) for p in points]
    if len(set(points)) != m:
        raise PreconditionFailed("Evaluation points must be distinct")

    E = Divisor(tuple((p, 1) for p in points))
    for i, (f, p) in enumerate(zip(sections, points)):
        if f.is_bottom:
            raise PreconditionFailed(f"Section {i} is the -inf function", {"section": i})
        if not is_section(f, D - E + Divisor.point(p)):
            raise PreconditionFailed(f"Section {i} is not a section of D - E + P_{i}", {"section": i})

    A = TropMatrix.of([[f.evaluate(p) for f in sections] for p in points])
    certificate = ff4_solve(A)

    if certificate.case == "II":
        v = certificate.v
        g = tropical_combination(v.coords, sections)
        values = mat_apply(A, v)
        off_diagonal = []
        for i in range(m):
            for j in range(m):
                if j != i and mul(A.entry(i, j), v[j]) == values[i]:
                    off_diagonal.append(j)
                    break
            else:
                raise InternalVerificationFailed(f"Value at point {i} is only reached on the diagonal")
        residual = (D - E).canonical_on(graph)
        if not is_section(g, residual):
            raise InternalVerificationFailed("Combination is not a section of D - E")
        logger.debug("fe7 produced a section witness with v=%s", v)
        return SectionWitness(v, g, tuple(off_diagonal), residual, certificate, A)

    v, epsilon = certificate.v, certificate.epsilon
    module = box_module(v, epsilon)
    generators = module.generators
    diagonal = delta(A)
    acts_diagonally = all(mat_apply(A, h) == mat_apply(diagonal, h) for h in generators)
    images = tuple(tropical_combination(h.coords, sections) for h in generators)
    dimension = module.dimension()
    if not acts_diagonally or dimension != m or not all(is_section(g, D) for g in images):
        raise InternalVerificationFailed("Box module failed its checks")
    logger.debug("fe7 produced a box module of dimension %d", dimension)
    return BoxModule(v, epsilon, module, dimension, acts_diagonally, images, certificate, A)


def star_graph(n: int) -> MetricGraph:
    """Γ_n: centre P with rays E_0 (direction (1,...,1)) and E_i (direction -e_i)."""
    if n < 1:
        raise InvalidInput("The star needs n ≥ 1")
    return MetricGraph(("P",), tuple(Edge(f"E{i}", "P") for i in range(n + 1)))


def _upper_envelope(lines: Sequence[Tuple[Fraction, int]]) -> EdgeFunction:
    """max of lines c + s·t on [0, ∞)."""
    current = max(lines, key=lambda line: (line[0], line[1]))
    t = Fraction(0)
    knots = [(t, current[0])]
    while True:
        best: Optional[Tuple[Fraction, int, Fraction]] = None
        for c, s in lines:
            if s <= current[1]:
                continue
            crossing = (current[0] - c) / (s - current[1])
            if crossing <= t:
                continue
            if best is None or (crossing, -s) < (best[0], -best[1]):
                best = (crossing, s, c)
        if best is None:
            break
        t = best[0]
        current = (best[2], best[1])
        knots.append((t, current[0] + current[1] * t))
    return EdgeFunction(tuple(knots), current[1])


def restrict_to_star(f: TropPolynomial) -> RationalFunction:
    """Restriction of a Laurent polynomial in n variables to Γ_n."""
    if not len(f):
        raise InvalidInput("The -inf polynomial has no restriction with finite values")
    n = f.nvars
    graph = star_graph(n)
    pieces = {}
    for i in range(n + 1):
        lines = []
        for exponent, coeff in f.terms:
            slope = sum(exponent) if i == 0 else -exponent[i - 1]
            lines.append((coeff.value, slope))
        pieces[f"E{i}"] = _upper_envelope(lines)
    return RationalFunction.from_pieces(graph, pieces)


def dip_function(graph: MetricGraph, edge: str, start: RationalLike, end: RationalLike) -> RationalFunction:
    """0 everywhere except a slope -1 / +1 dip between two offsets of one bounded edge."""
    start, end = _rational(start), _rational(end)
    e = graph.edge(edge)
    if e.is_ray or not 0 <= start < end <= e.length:
        raise InvalidInput(f"Dip [{start}, {end}] does not fit on edge {edge}")
    middle = (start + end) / 2
    knots = [(start, Fraction(0)), (middle, start - middle), (end, Fraction(0))]
    if start > 0:
        knots.insert(0, (Fraction(0), Fraction(0)))
    if end < e.length:
        knots.append((e.length, Fraction(0)))
    pieces = dict(RationalFunction.constant(graph).pieces)
    pieces[edge] = EdgeFunction(tuple(knots))
    return RationalFunction.from_pieces(graph, pieces)


def evaluation_module(sections: Sequence[RationalFunction], points: Sequence[CurvePoint]) -> Submodule:
    """Image of span(sections) under evaluation at the points."""
    return Submodule.span([TropVector(tuple(f.evaluate(p) for p in points)) for f in sections])


def loop_curve(a: RationalLike, p: RationalLike) -> Tuple[MetricGraph, CurvePoint]:
    """A single loop E of length a at vertex V, with the marked point at offset p."""
    graph = MetricGraph(("V",), (Edge("E", "V", "V", _rational(a)),))
    return graph, graph.canonical(CurvePoint.on("E", p))


def theta_curve(b: RationalLike, p: RationalLike) -> Tuple[MetricGraph, CurvePoint]:
    """Three edges E1, E2, E3 of length b from V1 to V2, marked point on E1 at offset p."""
    b = _rational(b)
    graph = MetricGraph(("V1", "V2"), tuple(Edge(f"E{i}", "V1", "V2", b) for i in (1, 2, 3)))
    return graph, graph.canonical(CurvePoint.on("E1", p))


def rescale_coordinates(module: Submodule, shifts: Sequence[RationalLike]) -> Submodule:
    """Image of a module under x ↦ (x_i + s_i)_i."""
    if len(shifts) != module.ambient_dim:
        raise InvalidInput(f"Need {module.ambient_dim} shifts, got {len(shifts)}")
    factors = [TropScalar(_rational(s)) for s in shifts]
    return Submodule(
        module.ambient_dim,
        tuple(TropVector(tuple(mul(x, s) for x, s in zip(g, factors))) for g in module.generators),
    )


def permute_coordinates(module: Submodule, order: Sequence[int]) -> Submodule:
    """Image of a module under x ↦ (x_{order[0]}, x_{order[1]}, ...)."""
    if sorted(order) != list(range(module.ambient_dim)):
        raise InvalidInput(f"{list(order)} is not a permutation of the coordinates")
    return Submodule(module.ambient_dim, tuple(TropVector(tuple(g[i] for i in order)) for g in module.generators))
