"""Exception hierarchy.

Errors fall into three families so the CLI can map them onto exit codes:
usage problems (bad names, bad parameters, bad syntax), domain/range
problems, and numerical failures.
"""


class IsoframeError(Exception):
    """Base class for every error raised by the package."""


class UsageError(IsoframeError):
    pass


class DomainError(IsoframeError):
    pass


class NumericError(IsoframeError):
    pass


# usage
class UnknownMapping(UsageError):
    pass


class InvalidParam(UsageError):
    pass


class UnknownIdentifier(UsageError):
    pass


class ExprSyntaxError(UsageError):
    """Malformed expression; carries the offending position and what was expected."""

    def __init__(self, message, position=0, expected=()):
        self.position = position
        self.expected = tuple(expected)
        detail = f"{message} at position {position}"
        if self.expected:
            detail += f" (expected {', '.join(self.expected)})"
        super().__init__(detail)


# domain / range
class DomainViolation(DomainError):
    pass


class RangeViolation(DomainError):
    pass


class DomainMismatch(DomainError):
    pass


class BondingViolation(DomainError):
    pass


class DivisorZero(DomainError):
    pass


class NonPositiveValue(DomainError):
    pass


class SingularGenerator(DomainError):
    pass


class DegenerateFrame(DomainError):
    pass


# numerics
class NonConvergent(NumericError):
    pass


class DivergentImproper(NumericError):
    pass


class NotBracketed(NumericError):
    pass


class NonMonotoneDetected(NumericError):
    pass


class NotInvertible(NumericError):
    pass


class NoRoot(NumericError):
    pass


class IndeterminateMonotonicity(NumericError):
    pass
