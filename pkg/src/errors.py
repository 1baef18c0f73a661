"""
Exception hierarchy shared by every module of the toolkit.

Each error carries a stable ``code`` (the class name) that the command
tools copy into the JSON error envelope.
"""

from typing import Any, Dict, Optional


class TropicalError(Exception):
    """Base class for all domain errors raised by the toolkit."""

    def __init__(self, message: str, details: Optional[Dict[str, Any]] = None):
        super().__init__(message)
        self.message = message
        self.details = details or {}

    @property
    def code(self) -> str:
        return type(self).__name__

    def to_dict(self) -> Dict[str, Any]:
        payload: Dict[str, Any] = {"code": self.code, "message": self.message}
        if self.details:
            payload["details"] = self.details
        return payload


class InvalidInput(TropicalError):
    """Malformed text, JSON or structurally invalid values."""


# semifield / freemod
class DivisionByZeroElement(TropicalError):
    pass


class LengthMismatch(TropicalError):
    pass


class NotInteriorVector(TropicalError):
    pass


class NegativePowerOfBottom(TropicalError):
    pass


class NotHomogeneous(TropicalError):
    pass


# submod
class NotInModule(TropicalError):
    pass


class NotInteriorGenerators(TropicalError):
    pass


class NotLatticePreserving(TropicalError):
    pass


class BottomBase(TropicalError):
    pass


class NotInjective(TropicalError):
    pass


class InconsistentConstraints(TropicalError):
    pass


# matrix
class SizeMismatch(TropicalError):
    pass


class OrderTooLarge(TropicalError):
    pass


class HypothesisViolated(TropicalError):
    pass


class InternalVerificationFailed(TropicalError):
    """A computed certificate failed its own re-verification."""


# polytope
class DimensionMismatch(TropicalError):
    pass


class NotFinitePoints(TropicalError):
    pass


class NotPolytrope(TropicalError):
    pass


# curve
class PointOffGraph(TropicalError):
    pass


class BottomFunction(TropicalError):
    pass


class NotASection(TropicalError):
    pass


class PreconditionFailed(TropicalError):
    pass


# planecurve
class DegenerateCurve(TropicalError):
    pass


class EmptyPolynomial(TropicalError):
    pass


class DuplicateExponent(TropicalError):
    pass
