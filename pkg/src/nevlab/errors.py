"""Exception types shared across the package."""

from __future__ import annotations


class NevlabError(Exception):
    """Base class for all package errors."""


class DimensionMismatchError(NevlabError):
    """Operands disagree on variable count or vector length."""


class SizeCapError(NevlabError):
    """A construction exceeds the configured desk-scale caps."""

    def __init__(self, message: str, cap: object = None):
        super().__init__(message)
        self.cap = cap


class ZeroPolynomialError(NevlabError):
    """A hypersurface constructor received the zero polynomial sentinel."""


class NotSquareFreeError(NevlabError):
    """Exact-mode hypersurface polynomial has a repeated factor."""


class DegenerateFamilyError(NevlabError):
    """A polynomial family is degenerate (e.g. identically zero Jacobian)."""


class MacaulayDegenerateError(NevlabError):
    """All Macaulay minors vanish; the determinant quotient is unavailable."""


class ZeroOnContourError(NevlabError):
    """A zero of the integrand sits on (or too close to) the contour."""


class CurveInsideDivisorError(NevlabError):
    """The pullback of the divisor along the curve vanishes identically."""


class CurveTooSmallError(NevlabError):
    """Order function too small for a meaningful defect quotient."""


class QuadratureBudgetError(NevlabError):
    """Adaptive quadrature failed to converge within its budget."""

    def __init__(self, message: str, last_iterates: tuple = ()):
        super().__init__(message)
        self.last_iterates = last_iterates


class CommonZeroError(NevlabError):
    """Forms share a projective zero where none is allowed."""

    def __init__(self, message: str, witness: object = None):
        super().__init__(message)
        self.witness = witness


class GeneralPositionError(NevlabError):
    """A required general-position certificate failed."""

    def __init__(self, message: str, certificate: object = None):
        super().__init__(message)
        self.certificate = certificate


class RetryExhaustedError(NevlabError):
    """Seeded retries ran out before a construction succeeded."""

    def __init__(self, message: str, attempts: tuple = ()):
        super().__init__(message)
        self.attempts = attempts


class PointRejectedError(NevlabError):
    """A sample point failed a conditioning or locus-membership check."""


class ImplicitizationError(NevlabError):
    """No candidate degree up to the cap admits a one-dimensional nullspace."""

    def __init__(self, message: str, suggested_cap: int | None = None):
        super().__init__(message)
        self.suggested_cap = suggested_cap


class ScenarioError(NevlabError):
    """Scenario/config file violates the schema."""

    def __init__(self, message: str, pointer: str = ""):
        super().__init__(message)
        self.pointer = pointer
