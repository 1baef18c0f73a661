"""
The free module T^n: vectors, their lattice operations, the dual pairing,
the ψ bijection and tropical (Laurent) polynomials.
"""

from dataclasses import dataclass
from typing import Dict, Iterable, Iterator, Mapping, Sequence, Tuple, Union

from ..errors import (
    InvalidInput,
    LengthMismatch,
    NegativePowerOfBottom,
    NotHomogeneous,
    NotInteriorVector,
)
from .semifield import NEG_INF, ZERO, ScalarLike, TropScalar, mul, power, tsum


@dataclass(frozen=True)
class TropVector:
    """Element of T^n; ``v + w`` is the join and ``a * v`` scales every coordinate."""

    coords: Tuple[TropScalar, ...]

    def __post_init__(self):
        coords = tuple(TropScalar.of(c) for c in self.coords)
        if not coords:
            raise InvalidInput("A vector needs at least one coordinate")
        object.__setattr__(self, "coords", coords)

    @classmethod
    def of(cls, values: Iterable[ScalarLike]) -> "TropVector":
        return cls(tuple(values))

    def __len__(self) -> int:
        return len(self.coords)

    def __iter__(self) -> Iterator[TropScalar]:
        return iter(self.coords)

    def __getitem__(self, index: int) -> TropScalar:
        return self.coords[index]

    def __str__(self) -> str:
        return "(" + ", ".join(str(c) for c in self.coords) + ")"

    def __add__(self, other: "TropVector") -> "TropVector":
        if not isinstance(other, TropVector):
            return NotImplemented
        return join(self, other)

    def __rmul__(self, scalar: ScalarLike) -> "TropVector":
        return scale(TropScalar.of(scalar), self)

    def __le__(self, other: "TropVector") -> bool:
        return leq(self, other)

    def __ge__(self, other: "TropVector") -> bool:
        return leq(other, self)

    @property
    def is_bottom(self) -> bool:
        return all(c.is_neg_inf for c in self.coords)

    @property
    def is_interior(self) -> bool:
        """True when every coordinate is finite (the vector lies in F*)."""
        return all(c.is_finite for c in self.coords)

    def support(self) -> Tuple[int, ...]:
        return tuple(i for i, c in enumerate(self.coords) if c.is_finite)

    def normalized(self) -> "TropVector":
        """Representative of the ray with largest finite coordinate 0; ⊥ stays ⊥."""
        top = tsum(self.coords)
        if top.is_neg_inf:
            return self
        return scale(top.inverse(), self)

    def replace(self, index: int, value: ScalarLike) -> "TropVector":
        coords = list(self.coords)
        coords[index] = TropScalar.of(value)
        return TropVector(tuple(coords))


def _check_lengths(v: TropVector, w: TropVector) -> None:
    if len(v) != len(w):
        raise LengthMismatch(f"Vectors of length {len(v)} and {len(w)} are not comparable")


def bottom(n: int) -> TropVector:
    return TropVector((NEG_INF,) * n)


def zero_vector(n: int) -> TropVector:
    return TropVector((ZERO,) * n)


def unit(n: int, i: int) -> TropVector:
    """e_i: 0 at coordinate i, -inf elsewhere."""
    return TropVector(tuple(ZERO if j == i else NEG_INF for j in range(n)))


def scale(a: TropScalar, v: TropVector) -> TropVector:
    return TropVector(tuple(mul(a, c) for c in v.coords))


def leq(v: TropVector, w: TropVector) -> bool:
    _check_lengths(v, w)
    return all(a <= b for a, b in zip(v.coords, w.coords))


def join(v: TropVector, w: TropVector) -> TropVector:
    _check_lengths(v, w)
    return TropVector(tuple(a if a >= b else b for a, b in zip(v.coords, w.coords)))


def meet(v: TropVector, w: TropVector) -> TropVector:
    _check_lengths(v, w)
    return TropVector(tuple(a if a <= b else b for a, b in zip(v.coords, w.coords)))


def join_all(vectors: Iterable[TropVector], n: int) -> TropVector:
    result = bottom(n)
    for v in vectors:
        result = join(result, v)
    return result


def pairing(v: TropVector, xi: TropVector) -> TropScalar:
    """⟨v, ξ⟩ = max_i (v_i + ξ_i)."""
    _check_lengths(v, xi)
    return tsum(mul(a, b) for a, b in zip(v.coords, xi.coords))


def psi(v: TropVector) -> TropVector:
    """Coordinatewise negation on F*."""
    if not v.is_interior:
        raise NotInteriorVector(f"psi needs finite coordinates, got {v}")
    return TropVector(tuple(c.inverse() for c in v.coords))


Exponent = Tuple[int, ...]
TermsLike = Union[Mapping[Sequence[int], ScalarLike], Iterable[Tuple[Sequence[int], ScalarLike]]]


@dataclass(frozen=True)
class TropPolynomial:
    """Finite tropical sum of monomials c ⊙ x^a; exponents may be negative."""

    nvars: int
    terms: Tuple[Tuple[Exponent, TropScalar], ...]

    def __post_init__(self):
        if self.nvars < 1:
            raise InvalidInput("A polynomial needs at least one variable")
        merged: Dict[Exponent, TropScalar] = {}
        for exponent, coeff in self.terms:
            key = tuple(int(e) for e in exponent)
            if len(key) != self.nvars:
                raise LengthMismatch(f"Exponent {key} does not have {self.nvars} entries")
            value = TropScalar.of(coeff)
            if value.is_neg_inf:
                continue
            merged[key] = value if key not in merged else merged[key] + value
        object.__setattr__(self, "terms", tuple(sorted(merged.items())))

    @classmethod
    def from_terms(cls, nvars: int, terms: TermsLike) -> "TropPolynomial":
        items = terms.items() if isinstance(terms, Mapping) else terms
        return cls(nvars, tuple((tuple(e), c) for e, c in items))

    @classmethod
    def monomial(cls, exponent: Sequence[int], coeff: ScalarLike = ZERO) -> "TropPolynomial":
        return cls(len(exponent), ((tuple(exponent), coeff),))

    @classmethod
    def constant(cls, nvars: int, coeff: ScalarLike = ZERO) -> "TropPolynomial":
        return cls.monomial((0,) * nvars, coeff)

    @classmethod
    def variable(cls, nvars: int, index: int) -> "TropPolynomial":
        return cls.monomial(tuple(1 if j == index else 0 for j in range(nvars)))

    def __len__(self) -> int:
        return len(self.terms)

    def coefficient(self, exponent: Sequence[int]) -> TropScalar:
        return dict(self.terms).get(tuple(exponent), NEG_INF)

    def degrees(self) -> Tuple[int, ...]:
        return tuple(sorted({sum(e) for e, _ in self.terms}))

    def is_homogeneous(self, degree: int = None) -> bool:
        found = self.degrees()
        if not found:
            return True
        if degree is None:
            return len(found) == 1
        return found == (degree,)

    def evaluate(self, v: TropVector) -> TropScalar:
        return poly_eval(self, v)

    def _check_compatible(self, other: "TropPolynomial") -> None:
        if self.nvars != other.nvars:
            raise LengthMismatch(f"Polynomials in {self.nvars} and {other.nvars} variables")

    def __add__(self, other: "TropPolynomial") -> "TropPolynomial":
        self._check_compatible(other)
        return TropPolynomial(self.nvars, self.terms + other.terms)

    def __mul__(self, other: "TropPolynomial") -> "TropPolynomial":
        self._check_compatible(other)
        products = [
            (tuple(a + b for a, b in zip(e1, e2)), mul(c1, c2))
            for e1, c1 in self.terms
            for e2, c2 in other.terms
        ]
        return TropPolynomial(self.nvars, tuple(products))

    def __pow__(self, k: int) -> "TropPolynomial":
        if k < 0:
            raise InvalidInput("Polynomial powers must be non-negative")
        result = TropPolynomial.constant(self.nvars)
        for _ in range(k):
            result = result * self
        return result

    def shift(self, a: ScalarLike) -> "TropPolynomial":
        """a ⊙ f."""
        a = TropScalar.of(a)
        return TropPolynomial(self.nvars, tuple((e, mul(a, c)) for e, c in self.terms))


def poly_eval(f: TropPolynomial, v: TropVector) -> TropScalar:
    """max over terms of coeff + Σ_j exponent_j · v_j."""
    if len(v) != f.nvars:
        raise LengthMismatch(f"Polynomial in {f.nvars} variables evaluated at length {len(v)}")
    values = []
    for exponent, coeff in f.terms:
        term = coeff
        for e, x in zip(exponent, v.coords):
            if e == 0:
                continue
            if x.is_neg_inf and e < 0:
                raise NegativePowerOfBottom(f"Exponent {e} applied to -inf in {exponent}")
            term = mul(term, power(x, e))
        values.append(term)
    return tsum(values)


@dataclass(frozen=True)
class Predicate:
    """The condition m·⟨v, p⟩ ≤ q(v) with q homogeneous of degree m."""

    p: TropVector
    q: TropPolynomial
    m: int

    def __post_init__(self):
        if self.m < 1:
            raise InvalidInput(f"Predicate degree must be positive, got {self.m}")
        if len(self.p) != self.q.nvars:
            raise LengthMismatch("Functional and polynomial live in different dimensions")
        if not self.q.is_homogeneous(self.m):
            raise NotHomogeneous(f"q has degrees {self.q.degrees()}, expected only {self.m}")

    def holds(self, v: TropVector) -> bool:
        return power(pairing(v, self.p), self.m) <= poly_eval(self.q, v)


def predicate_membership(p: TropVector, q: TropPolynomial, m: int, v: TropVector) -> bool:
    return Predicate(p, q, m).holds(v)


@dataclass(frozen=True)
class PredicateModule:
    """Submodule of T^n cut out by finitely many predicates."""

    ambient_dim: int
    predicates: Tuple[Predicate, ...]

    def __post_init__(self):
        for predicate in self.predicates:
            if len(predicate.p) != self.ambient_dim:
                raise LengthMismatch("Predicate dimension differs from the ambient dimension")

    def contains(self, v: TropVector) -> bool:
        if len(v) != self.ambient_dim:
            raise LengthMismatch(f"Vector of length {len(v)} in T^{self.ambient_dim}")
        return all(predicate.holds(v) for predicate in self.predicates)
