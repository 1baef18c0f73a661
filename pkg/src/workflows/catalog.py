"""
Builders for the worked examples: the infinitely generated module of the
(2t, t, 0) family and the two curves whose section modules agree while
their divisor ranks differ.
"""

from fractions import Fraction
from typing import Dict, NamedTuple, Tuple

import numpy as np

from ..algebra.freemod import Predicate, PredicateModule, TropPolynomial, TropVector
from ..algebra.semifield import NEG_INF, TropScalar
from ..algebra.submod import Submodule
from ..curves.curve import (
    CurvePoint,
    Divisor,
    Edge,
    EdgeFunction,
    MetricGraph,
    RationalFunction,
    dip_function,
    evaluation_module,
    loop_curve,
    theta_curve,
)

# r(D) of the two divisors, taken as known values
DIVISOR_RANKS: Dict[str, int] = {"loop": 1, "theta": 0}


def family_point(t: Fraction) -> TropVector:
    """e(t) = (2t, t, 0)."""
    t = Fraction(t)
    return TropVector.of([2 * t, t, 0])


def family_module() -> PredicateModule:
    """{(a, b, c) : (-1)a ⊕ c ≤ b and 2b ≤ a ⊙ c}."""
    first = Predicate(
        TropVector((TropScalar(-1), NEG_INF, TropScalar(0))),
        TropPolynomial.variable(3, 1),
        1,
    )
    second = Predicate(
        TropVector((NEG_INF, TropScalar(0), NEG_INF)),
        TropPolynomial.monomial((1, 0, 1)),
        2,
    )
    return PredicateModule(3, (first, second))


def family_span(steps: int = 4) -> Submodule:
    """Finite sub-span generated by e(j/steps), j = 0..steps."""
    return Submodule.span([family_point(Fraction(j, steps)) for j in range(steps + 1)])


def family_decomposition(v: TropVector) -> TropVector:
    """c ⊙ e(b - c) ⊕ (2b - a) ⊙ e(a - b) for a finite point (a, b, c)."""
    a, b, c = (x.value for x in v)
    return TropScalar(c) * family_point(b - c) + TropScalar(2 * b - a) * family_point(a - b)


def family_sample(rng: np.random.Generator, grid: int = 8) -> TropVector:
    """Random finite point of the family module with coordinates on a 1/grid lattice."""
    c = Fraction(int(rng.integers(-4 * grid, 4 * grid + 1)), grid)
    first = Fraction(int(rng.integers(0, grid + 1)), grid)
    second = first + Fraction(int(rng.integers(0, grid - int(first * grid) + 1)), grid)
    b = c + first
    return TropVector.of([b + second, b, c])


def non_straight_triple() -> Tuple[TropVector, TropVector, TropVector]:
    half = Fraction(1, 2)
    return (
        TropVector.of([half, half, half]),
        TropVector.of([1, half, 0]),
        TropVector.of([1, 0, 0]),
    )


class MarkedCurve(NamedTuple):
    graph: MetricGraph
    point: CurvePoint
    divisor: Divisor
    sections: Tuple[RationalFunction, ...]
    dips: Tuple[CurvePoint, ...]


def loop_example(a: Fraction = Fraction(2)) -> MarkedCurve:
    """Genus one: loop of length a at V, D = V + P with P halfway round."""
    a = Fraction(a)
    graph, point = loop_curve(a, a / 2)
    divisor = Divisor.of([(CurvePoint.at("V"), 1), (point, 1)])
    sections = (dip_function(graph, "E", 0, a / 2), dip_function(graph, "E", a / 2, a))
    dips = (CurvePoint.on("E", a / 4), CurvePoint.on("E", 3 * a / 4))
    return MarkedCurve(graph, point, divisor, sections, dips)


def theta_example(b: Fraction = Fraction(2)) -> MarkedCurve:
    """Genus two: three edges of length 2b between V1 and V2, D' = V1 + P with P at distance b on E1."""
    b = Fraction(b)
    graph, point = theta_curve(2 * b, b)
    divisor = Divisor.of([(CurvePoint.at("V1"), 1), (point, 1)])
    sections = (RationalFunction.constant(graph), dip_function(graph, "E1", 0, b))
    dips = (CurvePoint.at("V1"), CurvePoint.on("E1", b / 2))
    return MarkedCurve(graph, point, divisor, sections, dips)


def section_module(curve: MarkedCurve) -> Submodule:
    """Sections evaluated at the chosen points."""
    return evaluation_module(curve.sections, curve.dips)


def reference_module(length: Fraction) -> Submodule:
    """span{(0, 0), (0, length/2)}."""
    return Submodule.span([TropVector.of([0, 0]), TropVector.of([0, Fraction(length) / 2])])


def segment_graph(length: Fraction = Fraction(2)) -> MetricGraph:
    return MetricGraph(("A", "B"), (Edge("E", "A", "B", Fraction(length)),))


def tent_function(graph: MetricGraph) -> RationalFunction:
    """Slope 1 up to the midpoint of E, then slope -1."""
    length = graph.edge("E").length
    knots = ((Fraction(0), Fraction(0)), (length / 2, length / 2), (length, Fraction(0)))
    return RationalFunction.from_pieces(graph, {"E": EdgeFunction(knots)})
