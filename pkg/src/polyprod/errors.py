"""Exception hierarchy.

Validation problems derive from ``ValueError`` (CLI exit code 2); hitting a
computational limit derives from ``RuntimeError`` (CLI exit code 3).
"""


class PolyprodError(Exception):
    pass


class ValidationError(PolyprodError, ValueError):
    pass


class LimitError(PolyprodError, RuntimeError):
    pass


class DegreeError(ValidationError):
    pass


class UnsupportedDegree(ValidationError):
    pass


class InvalidFactorization(ValidationError):
    pass


class DomainError(ValidationError):
    pass


class NoSuchCharacter(ValidationError):
    pass


class InvalidInput(ValidationError):
    pass


class UndefinedProduct(ValidationError):
    """The product hit a zero value, so power questions are meaningless."""


class NoPrimes(ValidationError):
    pass


class XTooSmall(ValidationError):
    pass


class InvalidSeed(ValidationError):
    pass


class EmptyPrimeSet(ValidationError):
    pass


class NotApplicable(ValidationError):
    pass


class TheoremInapplicable(DomainError):
    pass


class InternalInconsistency(PolyprodError, AssertionError):
    """Raised when two computations that must agree do not; always a bug."""


class SieveTooSmall(LimitError):
    pass


class CapExceeded(LimitError):
    pass
