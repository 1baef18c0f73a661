"""
Max-plus matrices: products and powers, the diagonal / off-diagonal split,
the tropical determinant, the power stabilization lemma and the
eigen-dichotomy solver with re-verified certificates.
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, List, NamedTuple, Optional, Sequence, Tuple

import numpy as np
from scipy.optimize import linear_sum_assignment

from ..config.settings import get_settings
from ..errors import (
    HypothesisViolated,
    InternalVerificationFailed,
    InvalidInput,
    OrderTooLarge,
    SizeMismatch,
)
from .freemod import TropVector, unit, zero_vector
from .semifield import NEG_INF, ZERO, ScalarLike, TropScalar, mul, tsum

logger = logging.getLogger(__name__)

ONE = TropScalar(Fraction(1))


@dataclass(frozen=True)
class TropMatrix:
    """Rectangular grid of scalars acting on column vectors by (A⊙v)_i = max_j (A_ij + v_j)."""

    rows: Tuple[Tuple[TropScalar, ...], ...]

    def __post_init__(self):
        rows = tuple(tuple(TropScalar.of(a) for a in row) for row in self.rows)
        if not rows or not rows[0]:
            raise InvalidInput("A matrix needs at least one entry")
        width = len(rows[0])
        if any(len(row) != width for row in rows):
            raise SizeMismatch("Matrix rows have different lengths")
        object.__setattr__(self, "rows", rows)

    @classmethod
    def of(cls, entries: Iterable[Iterable[ScalarLike]]) -> "TropMatrix":
        return cls(tuple(tuple(row) for row in entries))

    @classmethod
    def identity(cls, n: int) -> "TropMatrix":
        return cls(tuple(tuple(ZERO if i == j else NEG_INF for j in range(n)) for i in range(n)))

    @classmethod
    def from_columns(cls, columns: Sequence[TropVector]) -> "TropMatrix":
        if not columns:
            raise InvalidInput("At least one column is required")
        height = len(columns[0])
        if any(len(c) != height for c in columns):
            raise SizeMismatch("Columns have different lengths")
        return cls(tuple(tuple(c[i] for c in columns) for i in range(height)))

    @property
    def n_rows(self) -> int:
        return len(self.rows)

    @property
    def n_cols(self) -> int:
        return len(self.rows[0])

    @property
    def is_square(self) -> bool:
        return self.n_rows == self.n_cols

    @property
    def order(self) -> int:
        if not self.is_square:
            raise SizeMismatch(f"Expected a square matrix, got {self.n_rows}x{self.n_cols}")
        return self.n_rows

    def entry(self, i: int, j: int) -> TropScalar:
        return self.rows[i][j]

    def column(self, j: int) -> TropVector:
        return TropVector(tuple(row[j] for row in self.rows))

    def columns(self) -> Tuple[TropVector, ...]:
        return tuple(self.column(j) for j in range(self.n_cols))

    def apply(self, v: TropVector) -> TropVector:
        return mat_apply(self, v)

    def __matmul__(self, other):
        if isinstance(other, TropVector):
            return mat_apply(self, other)
        if isinstance(other, TropMatrix):
            return mat_mul(self, other)
        return NotImplemented

    def __add__(self, other: "TropMatrix") -> "TropMatrix":
        if not isinstance(other, TropMatrix):
            return NotImplemented
        return mat_join(self, other)

    def __le__(self, other: "TropMatrix") -> bool:
        _check_same_shape(self, other)
        return all(a <= b for r1, r2 in zip(self.rows, other.rows) for a, b in zip(r1, r2))

    def scale(self, a: TropScalar) -> "TropMatrix":
        return TropMatrix(tuple(tuple(mul(a, x) for x in row) for row in self.rows))

    def power(self, k: int) -> "TropMatrix":
        if k < 0:
            raise InvalidInput("Matrix powers must be non-negative")
        result = TropMatrix.identity(self.order)
        for _ in range(k):
            result = mat_mul(result, self)
        return result

    def __str__(self) -> str:
        return "[" + ", ".join("[" + ", ".join(str(a) for a in row) + "]" for row in self.rows) + "]"


def _check_same_shape(A: TropMatrix, B: TropMatrix) -> None:
    if (A.n_rows, A.n_cols) != (B.n_rows, B.n_cols):
        raise SizeMismatch(f"Shapes {A.n_rows}x{A.n_cols} and {B.n_rows}x{B.n_cols} differ")


def mat_apply(A: TropMatrix, v: TropVector) -> TropVector:
    if len(v) != A.n_cols:
        raise SizeMismatch(f"Matrix with {A.n_cols} columns applied to length {len(v)}")
    return TropVector(tuple(tsum(mul(a, x) for a, x in zip(row, v.coords)) for row in A.rows))


def mat_mul(A: TropMatrix, B: TropMatrix) -> TropMatrix:
    if A.n_cols != B.n_rows:
        raise SizeMismatch(f"Cannot compose {A.n_rows}x{A.n_cols} with {B.n_rows}x{B.n_cols}")
    columns = B.columns()
    return TropMatrix(
        tuple(tuple(tsum(mul(a, b) for a, b in zip(row, col.coords)) for col in columns) for row in A.rows)
    )


def mat_join(A: TropMatrix, B: TropMatrix) -> TropMatrix:
    _check_same_shape(A, B)
    return TropMatrix(tuple(tuple(a + b for a, b in zip(r1, r2)) for r1, r2 in zip(A.rows, B.rows)))


def delta(A: TropMatrix) -> TropMatrix:
    """Δ(A): the diagonal part."""
    n = A.order
    return TropMatrix(tuple(tuple(A.rows[i][j] if i == j else NEG_INF for j in range(n)) for i in range(n)))


def bar_delta(A: TropMatrix) -> TropMatrix:
    """Δ̄(A): the off-diagonal part."""
    n = A.order
    return TropMatrix(tuple(tuple(NEG_INF if i == j else A.rows[i][j] for j in range(n)) for i in range(n)))


def _check_order(A: TropMatrix, max_order: Optional[int] = None) -> int:
    n = A.order
    bound = max_order if max_order is not None else get_settings().det_max_order
    if n > bound:
        raise OrderTooLarge(f"Order {n} exceeds the enumeration bound {bound}")
    return n


def permutation_weights(A: TropMatrix, max_order: Optional[int] = None) -> Tuple[TropScalar, TropScalar]:
    """Return (e(A), c(A)): the best non-identity permutation weight and the identity weight.

    Row k is assigned at depth k; ``other[mask]`` holds the best weight of a
    partial assignment of rows 0..k-1 onto ``mask`` that is not the identity
    prefix, which lets the identity be excluded exactly.
    """
    n = _check_order(A, max_order)
    size = 1 << n
    identity_prefix = [ZERO]
    for k in range(n):
        identity_prefix.append(mul(identity_prefix[-1], A.rows[k][k]))

    other: List[TropScalar] = [NEG_INF] * size
    for mask in range(size - 1):
        k = bin(mask).count("1")
        on_identity = mask == (1 << k) - 1
        for j in range(n):
            if mask >> j & 1:
                continue
            a = A.rows[k][j]
            if a.is_neg_inf:
                continue
            target = mask | (1 << j)
            candidate = mul(other[mask], a)
            if on_identity and j != k:
                candidate = candidate + mul(identity_prefix[k], a)
            if candidate > other[target]:
                other[target] = candidate
    return other[size - 1], identity_prefix[n]


def trop_det(A: TropMatrix, max_order: Optional[int] = None) -> TropScalar:
    """Tropical determinant: max over permutations s of Σ_i A_{i s(i)}."""
    e, c = permutation_weights(A, max_order)
    return e + c


def det_by_assignment(A: TropMatrix) -> TropScalar:
    """Tropical determinant through scipy's assignment solver, re-scored exactly."""
    n = A.order
    finite = [abs(float(a.value)) for row in A.rows for a in row if a.is_finite]
    if not finite:
        return NEG_INF
    penalty = -(2.0 * n * (max(finite) + 1.0))
    weights = np.array(
        [[float(a.value) if a.is_finite else penalty for a in row] for row in A.rows], dtype=float
    )
    row_index, col_index = linear_sum_assignment(weights, maximize=True)
    total = ZERO
    for i, j in zip(row_index, col_index):
        total = mul(total, A.rows[int(i)][int(j)])
    return total


class StabilizationResult(NamedTuple):
    power: TropMatrix
    verified: bool


def ff3_stabilize(A: TropMatrix, max_order: Optional[int] = None) -> StabilizationResult:
    """For Δ(A) = E and det(A) = 0, return A^{n-1} after checking A^n = A^{n-1}."""
    n = A.order
    identity = TropMatrix.identity(n)
    if delta(A) != identity:
        raise HypothesisViolated("Diagonal part is not the identity", {"hypothesis": "delta_is_identity"})
    if trop_det(A, max_order) != ZERO:
        raise HypothesisViolated("Tropical determinant is not 0", {"hypothesis": "det_is_zero"})

    chain = [identity]
    for _ in range(n):
        chain.append(mat_mul(chain[-1], A))
    for lower, upper in zip(chain, chain[1:]):
        if not lower <= upper:
            raise InternalVerificationFailed("Power chain is not monotone")
    if chain[n] != chain[n - 1]:
        raise InternalVerificationFailed("A^n differs from A^(n-1)")
    return StabilizationResult(chain[n - 1], True)


def kleene_star(A: TropMatrix) -> TropMatrix:
    """A* = E ⊕ A ⊕ ... ⊕ A^{n-1}; requires every cycle weight ≤ 0."""
    n = A.order
    closure = (TropMatrix.identity(n) + A).power(max(n - 1, 0))
    step = mat_mul(A, closure)
    for i in range(n):
        if step.rows[i][i] > ZERO:
            raise HypothesisViolated(
                f"Cycle of positive weight through {i}", {"hypothesis": "no_positive_cycle"}
            )
    return closure


@dataclass(frozen=True)
class DichotomyCertificate:
    """Outcome of the eigen-dichotomy: case "I" (with ε > 0) or case "II"."""

    case: str
    v: TropVector
    epsilon: Optional[TropScalar] = None
    cycle: Optional[Tuple[int, ...]] = None

    def verify(self, A: TropMatrix) -> bool:
        if self.case == "I":
            if self.epsilon is None or not self.epsilon > ZERO or not self.v.is_interior:
                return False
            lifted = A + bar_delta(A).scale(self.epsilon)
            return mat_apply(lifted, self.v) == mat_apply(delta(A), self.v)
        if self.case == "II":
            return not self.v.is_bottom and mat_apply(A, self.v) == mat_apply(bar_delta(A), self.v)
        return False


def mul_all(values: Iterable[TropScalar]) -> TropScalar:
    """Tropical product of a sequence (ordinary sum, -inf absorbing)."""
    total = ZERO
    for value in values:
        total = mul(total, value)
    return total


def _row_normalized(A: TropMatrix) -> TropMatrix:
    """(⊘Δ(A)) ⊙ A: each row shifted so its diagonal entry becomes 0."""
    n = A.order
    return TropMatrix(
        tuple(tuple(A.rows[i][j] / A.rows[i][i] for j in range(n)) for i in range(n))
    )


def _nonnegative_cycle(normalized: TropMatrix) -> Optional[Tuple[Tuple[int, ...], List[TropScalar]]]:
    """First simple cycle of weight ≥ 0, by length and then lexicographically.

    Cycles start at their smallest node; returns the node sequence and the
    edge weights along it.
    """
    n = normalized.order

    def extend(path: List[int], length: int):
        if len(path) == length:
            closing = normalized.rows[path[-1]][path[0]]
            if closing.is_finite:
                yield list(path)
            return
        for nxt in range(path[0] + 1, n):
            if nxt in path or normalized.rows[path[-1]][nxt].is_neg_inf:
                continue
            path.append(nxt)
            yield from extend(path, length)
            path.pop()

    for length in range(2, n + 1):
        for start in range(n):
            for path in extend([start], length):
                weights = [normalized.rows[a][b] for a, b in zip(path, path[1:] + path[:1])]
                if mul_all(weights) >= ZERO:
                    return tuple(path), weights
    return None


def ff4_solve(A: TropMatrix, max_order: Optional[int] = None) -> DichotomyCertificate:
    """Produce a verified case I or case II certificate for a square matrix."""
    n = _check_order(A, max_order)
    e, c = permutation_weights(A, max_order)

    if e < c:
        normalized = _row_normalized(A)
        if e.is_neg_inf:
            epsilon = ONE
        else:
            epsilon = min(ONE, TropScalar((c.value - e.value) / (2 * n)))
        lifted = normalized + bar_delta(normalized).scale(epsilon)
        v = mat_apply(lifted.power(n - 1), zero_vector(n))
        certificate = DichotomyCertificate("I", v, epsilon=epsilon)
        logger.debug("ff4 case I: e=%s c=%s epsilon=%s", e, c, epsilon)
    else:
        holes = [i for i in range(n) if A.rows[i][i].is_neg_inf]
        if holes:
            certificate = DichotomyCertificate("II", unit(n, holes[0]))
            logger.debug("ff4 case II from empty diagonal entry %d", holes[0])
        else:
            found = _nonnegative_cycle(_row_normalized(A))
            if found is None:
                raise InternalVerificationFailed(f"No cycle of weight >= 0 although e={e} >= c={c}")
            cycle, weights = found
            coords = [NEG_INF] * n
            for m, node in enumerate(cycle):
                coords[node] = mul_all(weights[m:])
            certificate = DichotomyCertificate("II", TropVector(tuple(coords)), cycle=cycle)
            logger.debug("ff4 case II from cycle %s", cycle)

    if not certificate.verify(A):
        raise InternalVerificationFailed(f"Certificate {certificate} failed re-verification")
    return certificate
