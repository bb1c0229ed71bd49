"""Exception types shared across the package."""

from __future__ import annotations


class LatticeError(Exception):
    """Base class for errors raised by the lattice engine."""


class UnknownGenerator(LatticeError):
    """A divisor class mentions a generator the lattice does not have."""


class IncompleteCurveData(LatticeError):
    """Curve data is missing the intersection number with some generator."""


class PatternMismatch(LatticeError):
    """A contraction or link does not match the expected class pattern.

    Carries the name of the failing check in ``check``.
    """

    def __init__(self, check: str, message: str = ""):
        self.check = check
        super().__init__(message or check)


class BadBoundaryShape(LatticeError):
    """A boundary class does not have the shape required by an operation."""


class NotASection(LatticeError):
    """The supplied curve is not a section of the fibration."""


class NotARuling(LatticeError):
    """The supplied curve is not a ruling of a fiber."""


class DegreeUnderflow(LatticeError):
    """An elementary transform would produce a ruled surface of degree -1."""


class InconsistentFlags(LatticeError):
    """Geometric flags passed to a decision procedure contradict each other."""


class TypeZero(LatticeError):
    """A type-decreasing step was requested on a state that has type 0."""


class DegreeZero(LatticeError):
    """A degree-decreasing step was requested at boundary degree 0."""


class NotStandard(LatticeError):
    """The standard-model recognizer failed; ``identity`` names the check."""

    def __init__(self, identity: str, message: str = ""):
        self.identity = identity
        super().__init__(message or identity)


class ParityViolation(LatticeError):
    """The degree/boundary parity invariant fails at the degree-0 stage."""


class NotA3(Exception):
    """Classification decided the descriptor is not an affine 3-space pair."""

    def __init__(self, failed: tuple[str, ...] = ()):
        self.failed = failed
        super().__init__("classification failed: " + ", ".join(failed))


class UndeterminedClassification(Exception):
    """Classification cannot be decided; lists the missing flags."""

    def __init__(self, missing: tuple[str, ...]):
        self.missing = missing
        super().__init__("missing flags: " + ", ".join(missing))


class ExprError(Exception):
    """Base class for expression parsing/evaluation errors."""


class ExprSyntaxError(ExprError):
    """Syntax error with the byte offset and the expected token kind."""

    def __init__(self, offset: int, expected: str):
        self.offset = offset
        self.expected = expected
        super().__init__(f"syntax error at offset {offset}: expected {expected}")


class DegreeMismatch(ExprError):
    """The total intersection degree of an expression is wrong."""


class UnknownName(ExprError):
    """An expression names a class the model does not know."""
