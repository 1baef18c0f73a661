from fractions import Fraction
from itertools import combinations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from src.algebra.freemod import TropVector
from src.algebra.semifield import UNBOUNDED
from src.algebra.submod import Submodule
from src.errors import DimensionMismatch, InvalidInput, NotFinitePoints, NotPolytrope
from src.geometry.polytope import ProjPoint, hull

from .strategies import constraint_matrices


def grid_convex(P, steps: int = 4) -> bool:
    """Ordinary convexity check: points on segments between hull samples stay in the hull."""
    rng = np.random.default_rng(7)
    points = [p.rep for p in P.sample_points(rng, 12)] + [p.rep for p in P.points]
    for a in points:
        for b in points:
            for k in range(1, steps):
                t = Fraction(k, steps)
                mid = TropVector.of([(1 - t) * x.value + t * y.value for x, y in zip(a, b)])
                if not P.contains_point(mid):
                    return False
    return True


def _crossing(line, u, d):
    """Parameter t where u + t*d meets the line, or None when they are parallel."""
    kind, c = line
    if kind == "x":
        num, den = c - u[0], d[0]
    elif kind == "y":
        num, den = c - u[1], d[1]
    else:
        num, den = c - (u[1] - u[0]), d[1] - d[0]
    return None if den == 0 else Fraction(num) / den


def _corner(first, second):
    (k1, a), (k2, b) = sorted([first, second])
    if (k1, k2) == ("x", "y"):
        return a, b
    if (k1, k2) == ("d", "x"):
        return b, a + b
    if (k1, k2) == ("d", "y"):
        return b - a, b
    return None


def exact_convex(P, affine):
    """Ordinary convexity of a hull of points (x, y) in the affine chart of TP^2.

    The hull is a union of closed cells cut out by the lines x = a, y = b and
    y - x = c through the points, so it is convex exactly when every segment
    between two cell corners inside it stays inside, and a segment can only
    leave or re-enter where it crosses one of those lines.
    """
    lines = sorted({line for x, y in affine for line in (("x", x), ("y", y), ("d", y - x))})
    corners = {_corner(a, b) for a, b in combinations(lines, 2)} - {None}
    inside = [q for q in corners if P.contains_point(ProjPoint.from_affine(q))]
    for u, v in combinations(inside, 2):
        d = (v[0] - u[0], v[1] - u[1])
        ts = {Fraction(0), Fraction(1)}
        for line in lines:
            t = _crossing(line, u, d)
            if t is not None and 0 < t < 1:
                ts.add(t)
        ts = sorted(ts)
        for t in ts + [(a + b) / 2 for a, b in zip(ts, ts[1:])]:
            if not P.contains_point(ProjPoint.from_affine([u[0] + t * d[0], u[1] + t * d[1]])):
                return False
    return True


class TestProjectivePoints:
    def test_first_finite_coordinate_is_zero(self):
        assert ProjPoint.of([2, 3, None]).rep == TropVector.of([0, 1, None])
        assert ProjPoint.of([None, 4, 5]).rep == TropVector.of([None, 0, 1])

    def test_affine_chart(self):
        assert ProjPoint.from_affine([1, 2]) == ProjPoint.of([0, 1, 2])

    def test_bottom_is_not_a_point(self):
        with pytest.raises(InvalidInput):
            ProjPoint.of([None, None])


class TestHull:
    def test_square_is_a_polytrope(self):
        P = hull([[0, 0, 0], [0, 2, 0], [0, 0, 2], [0, 2, 2]])
        assert P.is_polytrope()
        assert set(P.vertices()) == {ProjPoint.of(p) for p in ([0, 0, 0], [0, 2, 0], [0, 0, 2])}
        assert P.contains_point([0, 1, 1])
        assert not P.contains_point([0, 3, 0])

    def test_non_polytrope(self):
        P = hull([[0, 0, 0], [0, -1, -2]])
        certificate = P.is_polytrope()
        assert not certificate
        assert certificate.failing_coordinate == 1
        with pytest.raises(NotPolytrope):
            P.vertices()
        assert not grid_convex(P)
        assert not exact_convex(P, [(0, 0), (-1, -2)])

    def test_segment_in_dimension_one(self):
        P = hull([[0, 0], [0, 3]])
        assert P.is_polytrope()
        assert P.defining_inequalities() == ((0, 0), (3, 0))
        assert P.satisfies_inequalities([0, Fraction(3, 2)])
        assert not P.satisfies_inequalities([0, 4])
        assert grid_convex(P)

    def test_requires_finite_points(self):
        with pytest.raises(NotFinitePoints):
            hull([[0, None], [0, 0]]).is_polytrope()

    def test_dimensions_must_agree(self):
        with pytest.raises(DimensionMismatch):
            hull([[0, 0], [0, 0, 0]])
        with pytest.raises(DimensionMismatch):
            hull([[0, 0]]).contains_point([0, 0, 0])

    def test_inequalities_of_a_point(self):
        P = hull([[0, 1]])
        assert P.defining_inequalities() == ((0, -1), (1, 0))
        assert UNBOUNDED not in P.defining_inequalities()[0]

    @given(constraint_matrices(3, 4))
    def test_polytropes_from_constraints(self, bounds):
        module = Submodule.from_inequalities(bounds)
        P = hull(list(module.generators))
        assert P.is_polytrope()
        vertices = P.vertices()
        assert len(vertices) <= P.dim + 1
        assert hull(list(vertices)).module.equivalent_to(P.module)
        rng = np.random.default_rng(3)
        for p in P.sample_points(rng, 20):
            assert P.satisfies_inequalities(p)
            assert P.contains_point(p)

    @settings(max_examples=60)
    @given(st.lists(st.tuples(st.integers(-2, 2), st.integers(-2, 2)), min_size=1, max_size=3, unique=True))
    def test_polytrope_check_matches_ordinary_convexity(self, affine):
        P = hull([ProjPoint.from_affine(q) for q in affine])
        assert bool(P.is_polytrope()) == exact_convex(P, affine)
