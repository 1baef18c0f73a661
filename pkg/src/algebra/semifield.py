"""
Exact arithmetic in the tropical semifield T = Q ∪ {-inf}.

``a + b`` is the tropical sum (max), ``a * b`` the tropical product (rational
addition) and ``a / b`` tropical division (rational subtraction). Values are
immutable and hash structurally, so they can be used in sets and as keys.
"""

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Union

from ..errors import DivisionByZeroElement, InvalidInput

NEG_INF_TEXT = "-inf"
POS_INF_TEXT = "+inf"

ScalarLike = Union["TropScalar", int, Fraction, str, None]


@dataclass(frozen=True)
class TropScalar:
    """Element of Q ∪ {-inf}. ``value`` is None for -inf."""

    value: Optional[Fraction] = None

    def __post_init__(self):
        if self.value is None:
            return
        if isinstance(self.value, bool) or not isinstance(self.value, (int, Fraction)):
            raise InvalidInput(f"Scalar value must be rational, got {self.value!r}")
        # Fraction keeps lowest terms with a positive denominator
        object.__setattr__(self, "value", Fraction(self.value))

    @classmethod
    def of(cls, raw: ScalarLike) -> "TropScalar":
        """Coerce ints, fractions, text forms and None into a scalar."""
        if isinstance(raw, TropScalar):
            return raw
        if raw is None:
            return NEG_INF
        if isinstance(raw, str):
            return cls.parse(raw)
        return cls(raw)

    @classmethod
    def parse(cls, text: str) -> "TropScalar":
        """Parse the text form ``"-inf"`` or ``"p/q"``."""
        stripped = text.strip()
        if stripped == NEG_INF_TEXT:
            return NEG_INF
        try:
            if "." in stripped or "e" in stripped.lower():
                raise ValueError(stripped)
            return cls(Fraction(stripped))
        except (ValueError, ZeroDivisionError):
            raise InvalidInput(f"Invalid tropical scalar: {text!r}")

    @property
    def is_finite(self) -> bool:
        return self.value is not None

    @property
    def is_neg_inf(self) -> bool:
        return self.value is None

    def __str__(self) -> str:
        if self.value is None:
            return NEG_INF_TEXT
        return str(self.value)

    def __repr__(self) -> str:
        return f"TropScalar('{self}')"

    # order: -inf is below every rational
    def _key(self):
        return (0, Fraction(0)) if self.value is None else (1, self.value)

    def __lt__(self, other: ScalarLike) -> bool:
        return self._key() < TropScalar.of(other)._key()

    def __le__(self, other: ScalarLike) -> bool:
        return self._key() <= TropScalar.of(other)._key()

    def __gt__(self, other: ScalarLike) -> bool:
        return self._key() > TropScalar.of(other)._key()

    def __ge__(self, other: ScalarLike) -> bool:
        return self._key() >= TropScalar.of(other)._key()

    def __add__(self, other: ScalarLike) -> "TropScalar":
        if not isinstance(other, (TropScalar, int, Fraction)):
            return NotImplemented
        return add(self, TropScalar.of(other))

    def __mul__(self, other):
        if not isinstance(other, (TropScalar, int, Fraction)):
            return NotImplemented
        return mul(self, TropScalar.of(other))

    __rmul__ = __mul__

    def __truediv__(self, other: ScalarLike) -> "TropScalar":
        return div(self, TropScalar.of(other))

    def __pow__(self, k: int) -> "TropScalar":
        return power(self, k)

    def inverse(self) -> "TropScalar":
        """Tropical inverse ⊘a, i.e. the rational negation."""
        return div(ZERO, self)


NEG_INF = TropScalar(None)
ZERO = TropScalar(Fraction(0))


class Unbounded:
    """The +inf marker used for missing constraints; deliberately not a TropScalar."""

    _instance: Optional["Unbounded"] = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "UNBOUNDED"

    def __str__(self) -> str:
        return POS_INF_TEXT


UNBOUNDED = Unbounded()


def add(a: TropScalar, b: TropScalar) -> TropScalar:
    """Tropical sum: the larger of the two arguments."""
    return a if a >= b else b


def mul(a: TropScalar, b: TropScalar) -> TropScalar:
    """Tropical product: rational addition, absorbing -inf."""
    if a.value is None or b.value is None:
        return NEG_INF
    return TropScalar(a.value + b.value)


def div(a: TropScalar, b: TropScalar) -> TropScalar:
    """Tropical division a ⊘ b."""
    if b.value is None:
        raise DivisionByZeroElement(f"Cannot divide {a} by -inf")
    if a.value is None:
        return NEG_INF
    return TropScalar(a.value - b.value)


def root(a: TropScalar, m: int) -> TropScalar:
    """The unique b with b^m = a."""
    if isinstance(m, bool) or not isinstance(m, int) or m < 1:
        raise InvalidInput(f"Root order must be a positive integer, got {m!r}")
    if a.value is None:
        return NEG_INF
    return TropScalar(a.value / m)


def power(a: TropScalar, k: int) -> TropScalar:
    """Tropical k-th power k·a; negative k needs a finite base."""
    if k == 0:
        return ZERO
    if a.value is None:
        if k < 0:
            raise DivisionByZeroElement("Negative power of -inf")
        return NEG_INF
    return TropScalar(a.value * k)


def tsum(values) -> TropScalar:
    """Tropical sum of an iterable; -inf for an empty one."""
    best = NEG_INF
    for item in values:
        if item > best:
            best = item
    return best


def tmin(values) -> Optional[TropScalar]:
    """Ordinary minimum of an iterable of scalars, None when empty."""
    best: Optional[TropScalar] = None
    for item in values:
        if best is None or item < best:
            best = item
    return best
