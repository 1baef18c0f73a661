from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from src.algebra.freemod import TropPolynomial, TropVector, poly_eval
from src.algebra.matrix import TropMatrix
from src.algebra.semifield import NEG_INF, TropScalar
from src.algebra.submod import Submodule
from src.curves.curve import (
    BoxModule,
    CurvePoint,
    Divisor,
    Edge,
    EdgeFunction,
    MetricGraph,
    RationalFunction,
    SectionWitness,
    box_generators,
    box_module,
    dip_function,
    evaluation_module,
    fe7_construct,
    is_section,
    loop_curve,
    module_closure_check,
    permute_coordinates,
    principal_divisor,
    rescale_coordinates,
    restrict_to_star,
    star_graph,
    theta_curve,
    tropical_combination,
)
from src.errors import (
    BottomFunction,
    InvalidInput,
    NotASection,
    PointOffGraph,
    PreconditionFailed,
)
from src.workflows import catalog

half = Fraction(1, 2)


@st.composite
def dip_combinations(draw, graph):
    """Constant function joined with shifted dips and summed with plain ones."""
    f = RationalFunction.constant(graph, draw(st.integers(-3, 3)))
    for _ in range(draw(st.integers(1, 4))):
        edge = draw(st.sampled_from(graph.edges))
        cells = int(2 * edge.length)
        start = draw(st.integers(0, cells - 1))
        end = draw(st.integers(start + 1, cells))
        dip = dip_function(graph, edge.name, Fraction(start, 2), Fraction(end, 2))
        if draw(st.booleans()):
            f = f + dip.shift(TropScalar(Fraction(draw(st.integers(-4, 4)), 2)))
        else:
            f = f * dip
    return f


@st.composite
def compact_functions(draw):
    """Random connected compact graph and a function built from shifted dips."""
    n = draw(st.integers(1, 3))
    vertices = tuple(f"V{k}" for k in range(n))
    ends = [(vertices[k], vertices[k + 1]) for k in range(n - 1)]
    ends += draw(st.lists(st.tuples(st.sampled_from(vertices), st.sampled_from(vertices)), max_size=2))
    if not ends:
        ends = [(vertices[0], vertices[0])]
    lengths = draw(st.lists(st.integers(1, 4), min_size=len(ends), max_size=len(ends)))
    graph = MetricGraph(
        vertices, tuple(Edge(f"E{k}", u, v, Fraction(L)) for k, ((u, v), L) in enumerate(zip(ends, lengths)))
    )
    return draw(dip_combinations(graph))


@st.composite
def function_pairs(draw):
    """Two functions on one graph: the segment, a loop, a theta graph or a random compact graph."""
    graph = draw(
        st.one_of(
            st.just(catalog.segment_graph()),
            st.just(loop_curve(3, 0)[0]),
            st.just(theta_curve(2, 0)[0]),
            compact_functions().map(lambda f: f.graph),
        )
    )
    return draw(dip_combinations(graph)), draw(dip_combinations(graph))


@st.composite
def star_polynomial_pairs(draw):
    n = draw(st.integers(1, 3))
    terms = st.dictionaries(st.tuples(*[st.integers(-2, 2)] * n), st.integers(-3, 3), min_size=1, max_size=3)
    return TropPolynomial.from_terms(n, draw(terms)), TropPolynomial.from_terms(n, draw(terms))


def critical_points(*functions):
    """Vertices of the common graph together with every breakpoint of the functions."""
    graph = functions[0].graph
    points = {CurvePoint.at(v) for v in graph.vertices}
    for f in functions:
        points.update(f.breakpoints())
    return sorted(points, key=lambda p: p.sort_key())


class TestGraphs:
    def test_edge_validation(self):
        with pytest.raises(InvalidInput):
            Edge("R", "P", None, Fraction(1))
        with pytest.raises(InvalidInput):
            Edge("E", "A", "B", Fraction(0))
        with pytest.raises(InvalidInput):
            Edge("E", "A", "B")

    def test_point_validation(self):
        with pytest.raises(InvalidInput):
            CurvePoint(vertex="A", edge="E", offset=Fraction(1))
        with pytest.raises(InvalidInput):
            CurvePoint(edge="E")

    def test_graph_must_be_connected(self):
        with pytest.raises(InvalidInput):
            MetricGraph(("A", "B"), (Edge("E", "A", "A", Fraction(1)),))

    def test_unknown_endpoint(self):
        with pytest.raises(InvalidInput):
            MetricGraph(("A",), (Edge("E", "A", "B", Fraction(1)),))

    def test_canonical_points(self):
        graph = catalog.segment_graph()
        assert graph.canonical(CurvePoint.on("E", 0)) == CurvePoint.at("A")
        assert graph.canonical(CurvePoint.on("E", 2)) == CurvePoint.at("B")
        assert graph.canonical(CurvePoint.on("E", 1)) == CurvePoint.on("E", 1)
        with pytest.raises(PointOffGraph):
            graph.canonical(CurvePoint.on("E", 3))
        with pytest.raises(PointOffGraph):
            graph.canonical(CurvePoint.at("C"))
        with pytest.raises(PointOffGraph):
            graph.edge("F")

    def test_loop_has_two_germs(self):
        graph = catalog.loop_example().graph
        assert len(graph.germs("V")) == 2
        assert graph.is_compact
        assert not star_graph(2).is_compact


class TestFunctions:
    def test_slopes_must_be_integers(self):
        with pytest.raises(InvalidInput):
            EdgeFunction(((0, 0), (2, 1)))

    def test_collinear_knots_are_merged(self):
        piece = EdgeFunction(((0, 0), (1, 1), (2, 2), (3, 1)))
        assert piece.knots == ((0, 0), (2, 2), (3, 1))

    def test_knots_start_at_zero(self):
        with pytest.raises(InvalidInput):
            EdgeFunction(((1, 0), (2, 0)))

    def test_discontinuity_is_rejected(self):
        graph = catalog.segment_graph()
        graph2 = MetricGraph(("A",), (Edge("L", "A", "A", Fraction(2)),))
        with pytest.raises(InvalidInput):
            RationalFunction.from_pieces(graph2, {"L": EdgeFunction(((0, 0), (2, 2)))})
        with pytest.raises(InvalidInput):
            RationalFunction.from_pieces(graph, {"E": EdgeFunction(((0, 0), (1, 1)))})

    def test_tent(self):
        graph = catalog.segment_graph()
        tent = catalog.tent_function(graph)
        assert tent.evaluate(CurvePoint.on("E", half)) == TropScalar(half)
        assert tent.evaluate(CurvePoint.at("B")) == TropScalar(0)
        D = principal_divisor(tent)
        assert D.entries == (
            (CurvePoint.at("A"), 1),
            (CurvePoint.at("B"), 1),
            (CurvePoint.on("E", 1), -2),
        )
        assert D.degree == 0

    def test_join_inserts_crossings(self):
        graph = catalog.segment_graph()
        f = catalog.tent_function(graph) + RationalFunction.constant(graph, half)
        assert f.piece("E").offsets == [0, half, 1, Fraction(3, 2), 2]
        assert f.evaluate(CurvePoint.on("E", Fraction(1, 4))) == TropScalar(half)
        assert principal_divisor(f).entries == (
            (CurvePoint.on("E", half), 1),
            (CurvePoint.on("E", 1), -2),
            (CurvePoint.on("E", Fraction(3, 2)), 1),
        )

    def test_sum_and_shift(self):
        graph = catalog.segment_graph()
        tent = catalog.tent_function(graph)
        doubled = tent * tent
        assert doubled.evaluate(CurvePoint.on("E", 1)) == TropScalar(2)
        assert tent.shift(TropScalar(3)).evaluate(CurvePoint.at("A")) == TropScalar(3)
        assert tent.shift(NEG_INF).is_bottom

    def test_bottom_function(self):
        graph = catalog.segment_graph()
        bottom = RationalFunction.bottom(graph)
        assert bottom.evaluate(CurvePoint.at("A")) == NEG_INF
        assert (bottom + catalog.tent_function(graph)) == catalog.tent_function(graph)
        assert (bottom * catalog.tent_function(graph)).is_bottom
        assert is_section(bottom, Divisor())
        with pytest.raises(BottomFunction):
            principal_divisor(bottom)

    @given(compact_functions())
    def test_principal_divisors_have_degree_zero(self, f):
        assert principal_divisor(f).degree == 0


class TestStar:
    @pytest.mark.parametrize("n", [1, 2, 3, 4])
    def test_orders_at_the_centre(self, n):
        centre = CurvePoint.at("P")
        x1_or_zero = TropPolynomial.variable(n, 0) + TropPolynomial.constant(n)
        assert restrict_to_star(x1_or_zero).order(centre) == 1
        monomial = TropPolynomial.monomial(tuple(range(-1, n - 1)), 3)
        assert restrict_to_star(monomial).order(centre) == 0

    def test_restriction_matches_evaluation(self):
        line = TropPolynomial.from_terms(2, {(0, 0): 0, (1, 0): 1, (0, 1): -2})
        f = restrict_to_star(line)
        for t in (Fraction(0), half, Fraction(3)):
            assert f.evaluate(CurvePoint.on("E0", t)) == poly_eval(line, TropVector.of([t, t]))
            assert f.evaluate(CurvePoint.on("E1", t)) == poly_eval(line, TropVector.of([-t, 0]))
            assert f.evaluate(CurvePoint.on("E2", t)) == poly_eval(line, TropVector.of([0, -t]))

    def test_rays_break_where_terms_cross(self):
        f = restrict_to_star(TropPolynomial.from_terms(1, {(0,): 0, (1,): -2}))
        assert f.breakpoints() == (CurvePoint.on("E0", 2),)
        assert f.order(CurvePoint.on("E0", 2)) == 1
        assert f.order(CurvePoint.at("P")) == 0


class TestOrderCalculus:
    @given(function_pairs())
    def test_order_of_a_sum_is_additive(self, pair):
        f, g = pair
        for p in critical_points(f, g):
            assert (f * g).order(p) == f.order(p) + g.order(p)

    @given(function_pairs())
    def test_order_of_a_join(self, pair):
        f, g = pair
        h = f + g
        for p in critical_points(f, g, h):
            assert h.order(p) >= min(f.order(p), g.order(p))
            if g.evaluate(p) <= f.evaluate(p):
                assert f.order(p) <= h.order(p)

    @given(star_polynomial_pairs())
    def test_order_calculus_on_the_star(self, pair):
        f, g = (restrict_to_star(p) for p in pair)
        h = f + g
        for p in critical_points(f, g, h):
            assert (f * g).order(p) == f.order(p) + g.order(p)
            assert h.order(p) >= min(f.order(p), g.order(p))
            if g.evaluate(p) <= f.evaluate(p):
                assert f.order(p) <= h.order(p)

    @given(star_polynomial_pairs(), st.integers(0, 3))
    def test_each_factor_adds_one_at_the_centre(self, pair, r):
        h = pair[0]
        n = h.nvars
        centre = CurvePoint.at("P")
        factor = TropPolynomial.variable(n, 0) + TropPolynomial.constant(n)
        expected = restrict_to_star(h).order(centre) + r
        assert restrict_to_star(h * factor**r).order(centre) == expected
        leading = TropPolynomial.monomial(h.terms[0][0], h.terms[0][1])
        assert restrict_to_star(leading * factor**r).order(centre) == r


class TestDivisors:
    def test_arithmetic(self):
        a, b = CurvePoint.at("A"), CurvePoint.at("B")
        D = Divisor.of({a: 2, b: -1})
        assert D.degree == 1
        assert not D.is_effective()
        assert (D + Divisor.point(b)).entries == ((a, 2),)
        assert (D - D).entries == ()
        assert D[CurvePoint.on("E", 1)] == 0

    def test_multiplicities_are_integers(self):
        with pytest.raises(InvalidInput):
            Divisor.point(CurvePoint.at("A"), half)

    def test_sections(self):
        graph = catalog.segment_graph()
        tent = catalog.tent_function(graph)
        peak = CurvePoint.on("E", 1)
        assert is_section(tent, Divisor.point(peak, 2))
        assert not is_section(tent, Divisor.point(peak, 1))
        assert is_section(RationalFunction.constant(graph), Divisor())

    def test_section_modules_are_closed(self, rng):
        for curve in (catalog.loop_example(), catalog.theta_example()):
            assert module_closure_check(curve.sections, curve.divisor, 30, rng)

    def test_closure_check_needs_sections(self):
        loop = catalog.loop_example()
        with pytest.raises(NotASection):
            module_closure_check(loop.sections, Divisor.point(CurvePoint.at("V")))

    def test_products_of_sections(self):
        loop = catalog.loop_example()
        g, h = loop.sections
        assert is_section(g * h, loop.divisor + loop.divisor)
        assert not is_section(g * h, loop.divisor)

    def test_tropical_combination(self):
        loop = catalog.loop_example()
        combined = tropical_combination([TropScalar(0), NEG_INF], loop.sections)
        assert combined == loop.sections[0]


class TestEqualLengthCurves:
    def test_loop_module(self):
        module = catalog.section_module(catalog.loop_example())
        assert module.equivalent_to(Submodule.span([[-half, 0], [0, -half]]))
        shifted = rescale_coordinates(module, [0, half])
        assert shifted.equivalent_to(catalog.reference_module(2))

    def test_theta_module(self):
        module = catalog.section_module(catalog.theta_example())
        assert module.equivalent_to(Submodule.span([[0, 0], [0, -1]]))
        assert permute_coordinates(module, [1, 0]).equivalent_to(catalog.reference_module(2))

    def test_modules_agree(self):
        loop = rescale_coordinates(catalog.section_module(catalog.loop_example()), [0, half])
        theta = catalog.section_module(catalog.theta_example())
        assert permute_coordinates(loop, [1, 0]).equivalent_to(theta)

    def test_coordinate_maps_validate(self):
        module = catalog.reference_module(2)
        with pytest.raises(InvalidInput):
            rescale_coordinates(module, [0])
        with pytest.raises(InvalidInput):
            permute_coordinates(module, [0, 0])

    def test_evaluation_module(self):
        graph = catalog.segment_graph()
        tent = catalog.tent_function(graph)
        module = evaluation_module([tent], [CurvePoint.at("A"), CurvePoint.on("E", 1)])
        assert module.generators == (TropVector.of([0, 1]),)


class TestBoxModules:
    def test_generators(self):
        v = TropVector.of([1, 0, 2])
        h = box_generators(v, TropScalar(half))
        assert h[0] == TropVector.of([Fraction(3, 2), 0, 2])
        assert h[2] == TropVector.of([1, 0, Fraction(5, 2)])

    def test_dimension_is_ambient(self):
        for m in (1, 2, 3, 4):
            v = TropVector.of(list(range(m)))
            assert box_module(v, TropScalar(1)).dimension() == m

    def test_requires_finite_corner_and_positive_epsilon(self):
        with pytest.raises(InvalidInput):
            box_module(TropVector.of([0, None]), TropScalar(1))
        with pytest.raises(InvalidInput):
            box_module(TropVector.of([0, 0]), TropScalar(0))


class TestDichotomyOnCurves:
    def test_loop_gives_a_box_of_dimension_two(self):
        loop = catalog.loop_example()
        outcome = fe7_construct(
            [loop.sections[0], RationalFunction.constant(loop.graph)],
            [CurvePoint.at("V"), CurvePoint.on("E", half)],
            loop.divisor,
        )
        assert isinstance(outcome, BoxModule)
        assert outcome.matrix == TropMatrix.of([[0, 0], [-half, 0]])
        assert outcome.epsilon == TropScalar(Fraction(1, 8))
        assert outcome.v == TropVector.of([Fraction(1, 8), 0])
        assert outcome.dimension == 2
        assert outcome.acts_diagonally
        assert catalog.DIVISOR_RANKS["loop"] <= outcome.dimension - 1
        assert all(is_section(g, loop.divisor) for g in outcome.images)

    def test_theta_gives_a_box_of_dimension_one(self):
        theta = catalog.theta_example()
        outcome = fe7_construct(
            [RationalFunction.constant(theta.graph)], [CurvePoint.on("E2", 2)], theta.divisor
        )
        assert isinstance(outcome, BoxModule)
        assert outcome.dimension == 1
        assert catalog.DIVISOR_RANKS["theta"] <= outcome.dimension - 1

    def test_segment_gives_a_section_witness(self):
        graph = catalog.segment_graph()
        a, b = CurvePoint.at("A"), CurvePoint.at("B")
        zero = RationalFunction.constant(graph)
        outcome = fe7_construct([zero, zero], [a, b], Divisor.of({a: 1, b: 1}))
        assert isinstance(outcome, SectionWitness)
        assert outcome.certificate.case == "II"
        assert outcome.v == TropVector.of([0, 0])
        assert outcome.off_diagonal == (1, 0)
        assert outcome.residual == Divisor()
        assert is_section(outcome.function, outcome.residual)

    def test_preconditions(self):
        loop = catalog.loop_example()
        zero = RationalFunction.constant(loop.graph)
        with pytest.raises(PreconditionFailed):
            fe7_construct([], [], loop.divisor)
        with pytest.raises(PreconditionFailed):
            fe7_construct([zero, zero], [CurvePoint.at("V")], loop.divisor)
        with pytest.raises(PreconditionFailed):
            fe7_construct([zero, zero], [CurvePoint.at("V"), CurvePoint.on("E", 0)], loop.divisor)
        with pytest.raises(PreconditionFailed):
            fe7_construct([RationalFunction.bottom(loop.graph)], [CurvePoint.at("V")], loop.divisor)
        with pytest.raises(PreconditionFailed):
            fe7_construct([loop.sections[0]], [CurvePoint.at("V")], Divisor.point(CurvePoint.at("V")))


def test_sampled_combinations_stay_in_the_box(rng):
    v, epsilon = TropVector.of([0, 1]), TropScalar(half)
    module = box_module(v, epsilon)
    for x in module.sample(rng, 20):
        shifted = [a.value - b.value for a, b in zip(x, v)]
        assert max(shifted) - min(shifted) <= epsilon.value
