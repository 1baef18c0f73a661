from fractions import Fraction
from itertools import combinations, product

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from src.algebra.freemod import TropVector, join, join_all, leq, meet, scale
from src.algebra.matrix import TropMatrix
from src.algebra.semifield import NEG_INF, UNBOUNDED, TropScalar
from src.algebra.submod import DualElement, Submodule, dual_eval, left_inverse
from src.errors import (
    BottomBase,
    InconsistentConstraints,
    InvalidInput,
    LengthMismatch,
    NotInjective,
    NotInModule,
    NotInteriorGenerators,
    NotLatticePreserving,
)
from src.workflows import catalog

from .strategies import (
    constraint_matrices,
    finite_scalars,
    generator_lists,
    nonnegative_rationals,
    vectors,
)


def brute_force_contains(generators, v):
    """Search coefficients among {v_i - w_i} ∪ {-inf}; any representation can be moved there."""
    choices = []
    for w in generators:
        options = {NEG_INF}
        options.update(v[i] / w[i] for i in w.support())
        choices.append(sorted(options))
    for coeffs in product(*choices):
        if join_all((scale(a, w) for a, w in zip(coeffs, generators)), len(v)) == v:
            return True
    return False


def first_meet_outside(M, points):
    """Fold meets over the points; the first pair whose meet leaves M, or None."""
    acc = points[0]
    for p in points[1:]:
        if not M.contains(meet(acc, p)):
            return acc, p
        acc = meet(acc, p)
    return None


@st.composite
def nested_constraints(draw):
    """Two consistent c-matrices, the second entrywise below the first."""
    outer = draw(constraint_matrices())
    n = len(outer)
    row = st.lists(nonnegative_rationals, min_size=n, max_size=n)
    tighter = draw(st.lists(row, min_size=n, max_size=n))
    inner = [[min(a, b) for a, b in zip(r, s)] for r, s in zip(outer, tighter)]
    return outer, inner


class TestResiduation:
    def test_example(self):
        M = Submodule.span([[0, 0], [0, 3]])
        v = TropVector.of([0, 2])
        assert M.residuation_coeffs(v) == (TropScalar(0), TropScalar(-1))
        assert M.project(v) == v
        assert v in M

    def test_outside(self):
        M = Submodule.span([[0, 0], [0, 3]])
        assert M.project(TropVector.of([1, 0])) == TropVector.of([0, 0])
        assert not M.contains(TropVector.of([1, 0]))

    def test_bottom_generators_are_ignored(self):
        M = Submodule.span([[None, None], [0, 1]])
        assert M.residuation_coeffs(TropVector.of([1, 2])) == (NEG_INF, TropScalar(1))
        assert M.contains(TropVector.of([None, None]))

    def test_length_mismatch(self):
        with pytest.raises(LengthMismatch):
            Submodule.span([[0, 0]]).contains(TropVector.of([0]))
        with pytest.raises(LengthMismatch):
            Submodule.span([[0, 0], [0]])

    def test_needs_generators(self):
        with pytest.raises(InvalidInput):
            Submodule.span([])

    @given(generator_lists(3), vectors(3))
    def test_contains_agrees_with_coefficient_search(self, generators, v):
        M = Submodule(3, tuple(generators))
        assert M.contains(v) == brute_force_contains(generators, v)

    @given(generator_lists(3), vectors(3))
    def test_projection_is_greatest_lower_point(self, generators, v):
        M = Submodule(3, tuple(generators))
        p = M.project(v)
        assert leq(p, v)
        assert M.contains(p)
        assert M.project(p) == p

    def test_sampled_points_are_members(self, rng):
        M = Submodule.span([[0, 1, None], [2, 0, 0], [-1, -1, 3]])
        assert all(M.contains(v) for v in M.sample(rng, 40))


class TestMinimalGenerators:
    def test_example(self):
        M = Submodule.span([[0, 0], [0, 3], [0, 2]])
        assert M.minimal_generators() == (TropVector.of([-3, 0]), TropVector.of([0, 0]))
        assert M.dimension() == 2

    def test_proportional_generators_collapse(self):
        M = Submodule.span([[1, 2], [3, 4], [None, 0]])
        assert M.minimal_generators() == (TropVector.of([None, 0]), TropVector.of([-1, 0]))

    @given(
        generator_lists(3, max_count=4),
        st.randoms(use_true_random=False),
        st.lists(finite_scalars, min_size=4, max_size=4),
    )
    def test_independent_of_presentation(self, generators, random, factors):
        M = Submodule(3, tuple(generators))
        shuffled = list(generators)
        random.shuffle(shuffled)
        rescaled = [scale(a, g) for a, g in zip(factors, shuffled)]
        rescaled.append(join(generators[0], generators[-1]))
        other = Submodule(3, tuple(rescaled))
        assert other.minimal_generators() == M.minimal_generators()
        assert other.equivalent_to(M)

    @given(nested_constraints())
    def test_dimension_grows_with_the_module(self, pair):
        outer, inner = pair
        N, M = Submodule.from_inequalities(outer), Submodule.from_inequalities(inner)
        assert all(N.contains(g) for g in M.generators)
        assert M.dimension() <= N.dimension() <= len(outer)

    @given(constraint_matrices())
    def test_section_minima_cannot_be_dropped(self, bounds):
        M = Submodule.from_inequalities(bounds)
        basis = M.minimal_generators()
        for minimum in M.is_lattice_preserving().minima:
            others = [b for b in basis if b != minimum.normalized()]
            assert len(others) == len(basis) - 1
            if others:
                assert not Submodule.span(others).contains(minimum)


class TestLatticePreserving:
    def test_minima(self):
        certificate = Submodule.span([[0, 0], [0, -2]]).is_lattice_preserving()
        assert certificate
        assert certificate.minima == (TropVector.of([0, -2]), TropVector.of([0, 0]))

    def test_failing_coordinate(self):
        certificate = Submodule.span([[0, 0, 0], [0, -1, -2]]).is_lattice_preserving()
        assert not certificate
        assert certificate.failing_coordinate == 1

    def test_family_sub_span_is_not_lattice_preserving(self):
        span = Submodule.span([catalog.family_point(Fraction(j, 2)) for j in range(3)])
        assert span.is_lattice_preserving().failing_coordinate == 1

    def test_interior_generators_required(self):
        with pytest.raises(NotInteriorGenerators):
            Submodule.span([[0, None], [0, 0]]).is_lattice_preserving()

    def test_section_map_of_segment(self):
        section = Submodule.span([[0, 0], [0, 3]]).section_map()
        assert section.bounds == ((0, 0), (3, 0))
        assert section.assignment == (1, 0)
        assert section.satisfies(TropVector.of([0, 2]))
        assert not section.satisfies(TropVector.of([0, 4]))
        assert not section.satisfies(TropVector.of([0, -1]))

    def test_section_map_with_dead_coordinate(self):
        section = Submodule.span([[0, None]]).section_map(interior_only=False)
        assert section.dead == (1,)
        assert section.bounds == ((0, UNBOUNDED), (UNBOUNDED, 0))
        assert section.satisfies(TropVector.of([5, None]))
        assert not section.satisfies(TropVector.of([5, 1]))

    def test_section_map_refuses_non_preserving(self):
        with pytest.raises(NotLatticePreserving):
            Submodule.span([[0, 0, 0], [0, -1, -2]]).section_map()

    def test_from_inequalities(self):
        M = Submodule.from_inequalities([[0, 0], [3, 0]])
        assert M.equivalent_to(Submodule.span([[0, 0], [0, 3]]))

    def test_inconsistent_inequalities(self):
        with pytest.raises(InconsistentConstraints):
            Submodule.from_inequalities([[0, -1], [-1, 0]])

    @given(constraint_matrices())
    def test_polytropes_round_trip_their_inequalities(self, bounds):
        M = Submodule.from_inequalities(bounds)
        section = M.section_map()
        rebuilt = Submodule.from_inequalities(section.bounds)
        assert rebuilt.equivalent_to(M)
        rng = np.random.default_rng(0)
        for v in M.sample(rng, 10):
            assert section.satisfies(v)

    @given(generator_lists(3, max_count=4, finite=True))
    def test_characterisations_agree(self, generators):
        M = Submodule(3, tuple(generators))
        certificate = M.is_lattice_preserving()
        minima_span = Submodule.span(list(certificate.minima))
        samples = M.sample(np.random.default_rng(2), 8)
        assert M.right_inverse_check(M.minimal_generators(), samples)
        if certificate:
            assert minima_span.equivalent_to(M)
            assert Submodule.from_inequalities(M.section_map().bounds).equivalent_to(M)
            assert M.dimension() <= M.ambient_dim
            for v, w in combinations(samples + M.generators, 2):
                assert M.inf(v, w) == meet(v, w)
        else:
            assert not minima_span.equivalent_to(M)
            i = certificate.failing_coordinate
            pair = first_meet_outside(M, [scale(g[i].inverse(), g) for g in M.generators])
            assert pair is not None
            assert M.inf(*pair) != meet(*pair)
            with pytest.raises(NotLatticePreserving):
                M.section_map()


class TestInversion:
    def test_left_inverse_of_injective_matrix(self):
        A = TropMatrix.of([[0, None], [1, None], [None, 0]])
        v = left_inverse(A, TropVector.of([2, 5, 3]))
        assert v == TropVector.of([2, 3])
        assert leq(A.apply(v), TropVector.of([2, 5, 3]))

    def test_left_inverse_rejects_non_injective(self):
        A = TropMatrix.from_columns([TropVector.of([0, 0]), TropVector.of([0, -2])])
        with pytest.raises(NotInjective):
            left_inverse(A, TropVector.of([0, 0]))

    def test_left_inverse_rejects_bottom_column(self):
        with pytest.raises(NotInjective):
            left_inverse(TropMatrix.of([[0, None], [0, None]]), TropVector.of([0, 0]))

    def test_inclusion_is_inverted(self, rng):
        M = Submodule.span([[0, 0], [0, -2]])
        for w in M.sample(rng, 30):
            assert M.left_inverse_of_inclusion(w) == w

    @given(constraint_matrices())
    def test_inclusion_of_polytrope_is_inverted(self, bounds):
        M = Submodule.from_inequalities(bounds)
        rng = np.random.default_rng(1)
        for w in M.sample(rng, 10):
            assert M.left_inverse_of_inclusion(w) == w

    def test_right_inverse(self):
        M = Submodule.span([[0, 0], [0, -2]])
        samples = [TropVector.of([0, -1]), TropVector.of([3, 2])]
        assert M.right_inverse_check(M.minimal_generators(), samples)
        with pytest.raises(NotInModule):
            M.right_inverse_check(M.minimal_generators(), [TropVector.of([0, 1])])

    def test_dual_elements(self, rng):
        e = TropVector.of([0, -2])
        eta = DualElement(e)
        assert eta.evaluate(e) == TropScalar(0)
        assert dual_eval(e, TropVector.of([1, 5])) == TropScalar(1)
        assert eta.check_axioms(Submodule.span([[0, 0], [0, -2]]).sample(rng, 20))
        with pytest.raises(BottomBase):
            DualElement(TropVector.of([None, None]))


class TestStraightness:
    def test_family_triple_violates_join_of_infima(self):
        report = catalog.family_span().straightness_sample_check([catalog.non_straight_triple()])
        assert not report
        violation = report.counterexample
        assert violation.condition == "join_of_inf"
        assert violation.left == TropVector.of([1, Fraction(1, 4), 0])
        assert violation.right == TropVector.of([1, Fraction(1, 2), 0])

    def test_infimum_requires_members(self):
        M = Submodule.span([[0, 0], [0, 3]])
        with pytest.raises(NotInModule):
            M.inf(TropVector.of([1, 0]), TropVector.of([0, 0]))

    def test_segment_is_straight_on_samples(self, rng):
        M = Submodule.span([[0, 0], [0, 3]])
        report = M.straightness_sample_check(M.sample_triples(rng, 20))
        assert report.holds and report.checked == 20

    @given(constraint_matrices())
    def test_polytropes_are_straight_on_samples(self, bounds):
        M = Submodule.from_inequalities(bounds)
        report = M.straightness_sample_check(M.sample_triples(np.random.default_rng(3), 10))
        assert report.holds and report.checked == 10
