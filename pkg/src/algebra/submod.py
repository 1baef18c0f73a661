"""
Finitely generated submodules of T^n.

Membership is decided by residuation: for every generator w_h the largest
scalar λ_h with λ_h ⊙ w_h ≤ v is computed, and v lies in the span exactly
when ⊕ λ_h ⊙ w_h gives v back. Everything else (minimal generators,
infima, the lattice-preserving test and its inequality description, dual
elements and inversions) is built on that projection.
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, List, Optional, Sequence, Tuple, Union

import numpy as np

from ..errors import (
    BottomBase,
    HypothesisViolated,
    InconsistentConstraints,
    InternalVerificationFailed,
    InvalidInput,
    LengthMismatch,
    NotInjective,
    NotInModule,
    NotInteriorGenerators,
    NotLatticePreserving,
)
from .freemod import TropVector, bottom, join, join_all, meet, scale, unit
from .matrix import TropMatrix, kleene_star, mat_apply
from .semifield import NEG_INF, ZERO, UNBOUNDED, ScalarLike, TropScalar, Unbounded, mul, tmin

logger = logging.getLogger(__name__)

Bound = Union[Fraction, Unbounded]


def _residual(w: TropVector, v: TropVector) -> TropScalar:
    """Largest a with a ⊙ w ≤ v; w must not be ⊥."""
    return tmin(v[i] / w[i] for i in w.support())


def dual_eval(e: TropVector, v: TropVector) -> TropScalar:
    """Closed form of the dual element of e: min over supp(e) of v_i - e_i."""
    if len(e) != len(v):
        raise LengthMismatch(f"Base of length {len(e)} paired with length {len(v)}")
    if e.is_bottom:
        raise BottomBase("The dual element of ⊥ is not defined")
    return _residual(e, v)


@dataclass(frozen=True)
class DualElement:
    """η attached to an element e: ⟨v, η⟩ = dual_eval(e, v)."""

    base: TropVector

    def __post_init__(self):
        if self.base.is_bottom:
            raise BottomBase("The dual element of ⊥ is not defined")

    def evaluate(self, v: TropVector) -> TropScalar:
        return dual_eval(self.base, v)

    def check_axioms(self, samples: Iterable[TropVector]) -> bool:
        """⟨e, η⟩ = 0, and ⟨v, η⟩ ⊙ e_j ≤ v_j for every sample and coordinate."""
        if self.evaluate(self.base) != ZERO:
            return False
        for v in samples:
            value = self.evaluate(v)
            if any(not mul(value, e_j) <= v_j for e_j, v_j in zip(self.base, v)):
                return False
        return True


def left_inverse(A: TropMatrix, w: TropVector) -> TropVector:
    """Greatest v with A ⊙ v ≤ w, for A injective on T^m.

    Injectivity is checked by sending every unit vector through A and back.
    """
    if len(w) != A.n_rows:
        raise LengthMismatch(f"Matrix with {A.n_rows} rows cannot invert length {len(w)}")
    columns = A.columns()
    for j, column in enumerate(columns):
        if column.is_bottom:
            raise NotInjective(f"Column {j} is ⊥", {"column": j})
    for j, column in enumerate(columns):
        e_j = unit(A.n_cols, j)
        if TropVector(tuple(_residual(c, column) for c in columns)) != e_j:
            raise NotInjective(f"Unit vector {j} does not survive the round trip", {"column": j})
    return TropVector(tuple(_residual(c, w) for c in columns))


@dataclass(frozen=True)
class LatticeCertificate:
    """Outcome of the lattice-preserving test.

    ``minima[i]`` is the candidate minimum of M ∩ V_i (None when no
    generator reaches coordinate i); on failure ``failing_coordinate`` is the
    first i whose candidate lies outside M.
    """

    preserving: bool
    minima: Tuple[Optional[TropVector], ...]
    failing_coordinate: Optional[int] = None

    def __bool__(self) -> bool:
        return self.preserving

    @property
    def dead_coordinates(self) -> Tuple[int, ...]:
        return tuple(i for i, v in enumerate(self.minima) if v is None)


@dataclass(frozen=True)
class SectionMap:
    """The assignment i ↦ s(i) and the system x_j ≥ x_i - c_{i,j} describing M."""

    basis: Tuple[TropVector, ...]
    assignment: Tuple[Optional[int], ...]
    bounds: Tuple[Tuple[Bound, ...], ...]
    dead: Tuple[int, ...] = ()

    def satisfies(self, x: TropVector) -> bool:
        if len(x) != len(self.bounds):
            raise LengthMismatch(f"Point of length {len(x)} for a system in {len(self.bounds)} variables")
        if any(x[i].is_finite for i in self.dead):
            return False
        for i, row in enumerate(self.bounds):
            if x[i].is_neg_inf:
                continue
            for j, c in enumerate(row):
                if c is UNBOUNDED:
                    continue
                if x[j] < TropScalar(x[i].value - c):
                    return False
        return True


@dataclass(frozen=True)
class Violation:
    triple: Tuple[TropVector, TropVector, TropVector]
    condition: str
    left: TropVector
    right: TropVector


@dataclass(frozen=True)
class StraightnessReport:
    holds: bool
    checked: int
    counterexample: Optional[Violation] = None

    def __bool__(self) -> bool:
        return self.holds


@dataclass(frozen=True)
class Submodule:
    """Span of a non-empty generator list in T^n; ⊥ generators are ignored."""

    ambient_dim: int
    generators: Tuple[TropVector, ...]

    def __post_init__(self):
        if self.ambient_dim < 1:
            raise InvalidInput("Ambient dimension must be positive")
        generators = tuple(g if isinstance(g, TropVector) else TropVector.of(g) for g in self.generators)
        if not generators:
            raise InvalidInput("A submodule needs at least one generator")
        for g in generators:
            if len(g) != self.ambient_dim:
                raise LengthMismatch(f"Generator {g} does not live in T^{self.ambient_dim}")
        object.__setattr__(self, "generators", generators)

    @classmethod
    def span(cls, vectors: Sequence[Union[TropVector, Sequence[ScalarLike]]]) -> "Submodule":
        vectors = [v if isinstance(v, TropVector) else TropVector.of(v) for v in vectors]
        if not vectors:
            raise InvalidInput("A submodule needs at least one generator")
        return cls(len(vectors[0]), tuple(vectors))

    @classmethod
    def from_inequalities(cls, bounds: Sequence[Sequence[Union[Bound, ScalarLike]]]) -> "Submodule":
        """The module {x : x_j ≥ x_i - c_{i,j}}, generated by the columns of a Kleene star."""
        n = len(bounds)
        if any(len(row) != n for row in bounds):
            raise LengthMismatch("The constraint matrix must be square")
        lower = [[NEG_INF] * n for _ in range(n)]
        for i, row in enumerate(bounds):
            for j, c in enumerate(row):
                if i == j or c is UNBOUNDED:
                    continue
                lower[j][i] = TropScalar.of(c).inverse()
        try:
            star = kleene_star(TropMatrix.of(lower))
        except HypothesisViolated as e:
            raise InconsistentConstraints(f"Constraint system has no finite solution: {e.message}")
        return cls(n, star.columns())

    @property
    def nonzero_generators(self) -> Tuple[TropVector, ...]:
        return tuple(g for g in self.generators if not g.is_bottom)

    @property
    def is_zero(self) -> bool:
        return not self.nonzero_generators

    def _check(self, v: TropVector) -> None:
        if len(v) != self.ambient_dim:
            raise LengthMismatch(f"Vector of length {len(v)} in T^{self.ambient_dim}")

    def residuation_coeffs(self, v: TropVector) -> Tuple[TropScalar, ...]:
        """λ_h for every listed generator (⊥ generators get -inf)."""
        self._check(v)
        return tuple(NEG_INF if w.is_bottom else _residual(w, v) for w in self.generators)

    def project(self, v: TropVector) -> TropVector:
        """Greatest element of M below v."""
        coeffs = self.residuation_coeffs(v)
        return join_all((scale(a, w) for a, w in zip(coeffs, self.generators)), self.ambient_dim)

    def contains(self, v: TropVector) -> bool:
        return self.project(v) == v

    def __contains__(self, v: TropVector) -> bool:
        return self.contains(v)

    def equivalent_to(self, other: "Submodule") -> bool:
        """Same span, checked by mutual containment of generators."""
        if other.ambient_dim != self.ambient_dim:
            return False
        return all(other.contains(g) for g in self.generators) and all(
            self.contains(g) for g in other.generators
        )

    def minimal_generators(self) -> Tuple[TropVector, ...]:
        candidates: List[TropVector] = []
        for g in self.nonzero_generators:
            ray = g.normalized()
            if ray not in candidates:
                candidates.append(ray)

        survivors = list(candidates)
        for ray in candidates:
            others = [u for u in survivors if u != ray]
            if others and Submodule(self.ambient_dim, tuple(others)).contains(ray):
                survivors.remove(ray)
                logger.debug("Dropped redundant generator %s", ray)
        return tuple(sorted(survivors, key=lambda v: v.coords))

    def dimension(self) -> int:
        return len(self.minimal_generators())

    def inf(self, v: TropVector, w: TropVector) -> TropVector:
        """inf_M {v, w}: projection of the ambient meet."""
        for point in (v, w):
            if not self.contains(point):
                raise NotInModule(f"{point} is not in the module")
        return self.project(meet(v, w))

    def is_lattice_preserving(self, interior_only: bool = True) -> LatticeCertificate:
        """Decide whether every section M ∩ V_i has a minimum that lies in M."""
        generators = self.nonzero_generators
        if interior_only and any(not g.is_interior for g in generators):
            raise NotInteriorGenerators("Every generator must have finite coordinates")

        minima: List[Optional[TropVector]] = []
        failing: Optional[int] = None
        for i in range(self.ambient_dim):
            reaching = [scale(g[i].inverse(), g) for g in generators if g[i].is_finite]
            if not reaching:
                minima.append(None)
                continue
            candidate = reaching[0]
            for g in reaching[1:]:
                candidate = meet(candidate, g)
            minima.append(candidate)
            if failing is None and not self.contains(candidate):
                failing = i
        return LatticeCertificate(failing is None, tuple(minima), failing)

    def section_map(self, interior_only: bool = True) -> SectionMap:
        certificate = self.is_lattice_preserving(interior_only)
        if not certificate:
            raise NotLatticePreserving(
                f"Coordinate {certificate.failing_coordinate} has no minimum in the module",
                {"failing_coordinate": certificate.failing_coordinate},
            )
        basis = self.minimal_generators()
        n = self.ambient_dim
        assignment: List[Optional[int]] = []
        bounds: List[Tuple[Bound, ...]] = []
        for i, minimum in enumerate(certificate.minima):
            if minimum is None:
                assignment.append(None)
                bounds.append(tuple(Fraction(0) if j == i else UNBOUNDED for j in range(n)))
                continue
            ray = minimum.normalized()
            if ray not in basis:
                raise InternalVerificationFailed(f"Minimum {minimum} is not a basis ray")
            assignment.append(basis.index(ray))
            bounds.append(tuple(-x.value if x.is_finite else UNBOUNDED for x in minimum))
        return SectionMap(basis, tuple(assignment), tuple(bounds), certificate.dead_coordinates)

    def right_inverse_check(self, basis: Sequence[TropVector], samples: Iterable[TropVector]) -> bool:
        """v = ⊕_i ⟨v, η_i⟩ ⊙ e_i for every sample, η_i dual to the basis element e_i."""
        for v in samples:
            if not self.contains(v):
                raise NotInModule(f"Sample {v} is not in the module")
            rebuilt = join_all((scale(dual_eval(e, v), e) for e in basis), self.ambient_dim)
            if rebuilt != v:
                return False
        return True

    def left_inversion_matrix(self) -> TropMatrix:
        """V with columns the section minima; w ↦ V ⊙ w is a homomorphism T^n → M fixing M."""
        certificate = self.is_lattice_preserving(interior_only=False)
        if not certificate:
            raise NotLatticePreserving(
                f"Coordinate {certificate.failing_coordinate} has no minimum in the module",
                {"failing_coordinate": certificate.failing_coordinate},
            )
        columns = [m if m is not None else bottom(self.ambient_dim) for m in certificate.minima]
        return TropMatrix.from_columns(columns)

    def left_inverse_of_inclusion(self, w: TropVector) -> TropVector:
        self._check(w)
        return mat_apply(self.left_inversion_matrix(), w)

    def straightness_sample_check(
        self, triples: Iterable[Tuple[TropVector, TropVector, TropVector]]
    ) -> StraightnessReport:
        """Test both distributive laws on the supplied triples.

        A reported violation proves the module is not straight; passing only
        says no violation was found among these triples.
        """
        checked = 0
        for v1, v2, w in triples:
            for point in (v1, v2, w):
                if not self.contains(point):
                    raise NotInModule(f"{point} is not in the module")
            checked += 1

            left = self.inf(join(v1, v2), w)
            right = join(self.inf(v1, w), self.inf(v2, w))
            if left != right:
                return StraightnessReport(False, checked, Violation((v1, v2, w), "inf_of_join", left, right))

            left = join(self.inf(v1, v2), w)
            right = self.inf(join(v1, w), join(v2, w))
            if left != right:
                return StraightnessReport(False, checked, Violation((v1, v2, w), "join_of_inf", left, right))
        return StraightnessReport(True, checked)

    def sample(self, rng: np.random.Generator, count: int, grid: int = 4) -> Tuple[TropVector, ...]:
        """Random tropical combinations with coefficients in {-grid..grid}/2 or -inf."""
        generators = self.nonzero_generators
        if not generators:
            return tuple(bottom(self.ambient_dim) for _ in range(count))
        points = []
        for _ in range(count):
            coeffs = rng.integers(-grid, grid + 1, size=len(generators))
            dropped = rng.random(len(generators)) < 0.25
            dropped[int(rng.integers(len(generators)))] = False
            terms = (
                scale(TropScalar(Fraction(int(c), 2)), g)
                for c, off, g in zip(coeffs, dropped, generators)
                if not off
            )
            points.append(join_all(terms, self.ambient_dim))
        return tuple(points)

    def sample_triples(self, rng: np.random.Generator, count: int) -> Tuple[Tuple[TropVector, ...], ...]:
        points = self.sample(rng, 3 * count)
        return tuple(tuple(points[3 * k: 3 * k + 3]) for k in range(count))
