"""
Tropical projective polytopes.

A polytope in TP^n is handled through its cone module M ⊂ T^{n+1}; it is a
polytrope (also convex in the ordinary sense) exactly when M passes the
lattice-preserving test, and then it is the hull of the section minima.
"""

import logging
from dataclasses import dataclass
from typing import Iterable, List, Sequence, Tuple, Union

import numpy as np

from ..algebra.freemod import TropVector, scale
from ..algebra.semifield import ZERO, ScalarLike
from ..algebra.submod import Bound, LatticeCertificate, Submodule
from ..errors import DimensionMismatch, InvalidInput, NotFinitePoints, NotPolytrope

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ProjPoint:
    """Point of TP^n held by its representative with first finite coordinate 0."""

    rep: TropVector

    def __post_init__(self):
        rep = self.rep if isinstance(self.rep, TropVector) else TropVector.of(self.rep)
        if rep.is_bottom:
            raise InvalidInput("⊥ does not define a projective point")
        first = next(c for c in rep if c.is_finite)
        object.__setattr__(self, "rep", scale(first.inverse(), rep))

    @classmethod
    def of(cls, coords: Iterable[ScalarLike]) -> "ProjPoint":
        return cls(TropVector.of(coords))

    @classmethod
    def from_affine(cls, coords: Iterable[ScalarLike]) -> "ProjPoint":
        """The chart (a_1, ..., a_n) ↦ (0, a_1, ..., a_n)."""
        return cls(TropVector.of([ZERO, *coords]))

    @property
    def dim(self) -> int:
        return len(self.rep) - 1

    @property
    def is_finite(self) -> bool:
        return self.rep.is_interior

    def __str__(self) -> str:
        return f"[{', '.join(str(c) for c in self.rep)}]"


PointLike = Union[ProjPoint, TropVector, Sequence[ScalarLike]]


def _as_point(p: PointLike) -> ProjPoint:
    if isinstance(p, ProjPoint):
        return p
    return ProjPoint(p if isinstance(p, TropVector) else TropVector.of(p))


@dataclass(frozen=True)
class Polytope:
    points: Tuple[ProjPoint, ...]
    module: Submodule

    @property
    def dim(self) -> int:
        return self.points[0].dim

    @classmethod
    def hull(cls, points: Sequence[PointLike]) -> "Polytope":
        projective = tuple(_as_point(p) for p in points)
        if not projective:
            raise InvalidInput("A hull needs at least one point")
        dims = {p.dim for p in projective}
        if len(dims) != 1:
            raise DimensionMismatch(f"Points live in projective spaces of dimensions {sorted(dims)}")
        module = Submodule(projective[0].dim + 1, tuple(p.rep for p in projective))
        return cls(projective, module)

    def _check(self, p: ProjPoint) -> None:
        if p.dim != self.dim:
            raise DimensionMismatch(f"Point in TP^{p.dim} tested against a polytope in TP^{self.dim}")

    def contains_point(self, p: PointLike) -> bool:
        point = _as_point(p)
        self._check(point)
        return self.module.contains(point.rep)

    def is_polytrope(self) -> LatticeCertificate:
        offending = [str(p) for p in self.points if not p.is_finite]
        if offending:
            raise NotFinitePoints(f"Points with -inf coordinates: {', '.join(offending)}")
        return self.module.is_lattice_preserving()

    def _require_polytrope(self) -> LatticeCertificate:
        certificate = self.is_polytrope()
        if not certificate:
            raise NotPolytrope(
                f"Coordinate {certificate.failing_coordinate} has no minimum in the hull",
                {"failing_coordinate": certificate.failing_coordinate},
            )
        return certificate

    def vertices(self) -> Tuple[ProjPoint, ...]:
        """At most n+1 points whose hull is the polytrope."""
        certificate = self._require_polytrope()
        found: List[ProjPoint] = []
        for minimum in certificate.minima:
            point = ProjPoint(minimum)
            if point not in found:
                found.append(point)
        return tuple(found)

    def defining_inequalities(self) -> Tuple[Tuple[Bound, ...], ...]:
        """c_{i,j} with the polytrope = {x : x_j ≥ x_i - c_{i,j}}."""
        self._require_polytrope()
        return self.module.section_map().bounds

    def satisfies_inequalities(self, p: PointLike) -> bool:
        point = _as_point(p)
        self._check(point)
        return self.module.section_map().satisfies(point.rep)

    def sample_points(self, rng: np.random.Generator, count: int) -> Tuple[ProjPoint, ...]:
        return tuple(ProjPoint(v) for v in self.module.sample(rng, count) if not v.is_bottom)


def hull(points: Sequence[PointLike]) -> Polytope:
    return Polytope.hull(points)
