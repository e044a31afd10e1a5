"""Exception hierarchy shared by every smm module."""


class SmmError(ValueError):
    """Base class for all errors raised by smm."""


# linear algebra
class NonSymmetric(SmmError):
    pass


class NoConvergence(SmmError):
    pass


class RankDeficient(SmmError):
    pass


class NotPositiveDefinite(SmmError):
    pass


class IllConditioned(SmmError):
    pass


class UnresolvedCluster(SmmError):
    pass


class MultiplicityMismatch(SmmError):
    pass


# model construction and validation
class InvalidDimensions(SmmError):
    pass


class DimensionMismatch(InvalidDimensions):
    pass


class ShapeMismatch(InvalidDimensions):
    pass


class LengthMismatch(InvalidDimensions):
    pass


class InvalidSignature(InvalidDimensions):
    pass


class DegenerateParams(SmmError):
    pass


class MembershipFailed(SmmError):
    pass


class ZeroVector(SmmError):
    pass


class NotRotation(SmmError):
    pass


class NonSymmetricTangent(SmmError):
    pass


# isospectral parameters
class NotGeneric(SmmError):
    pass


class SingularSystem(SmmError):
    pass


class NonIntegralSolution(SmmError):
    pass


class NonPositiveMultiplicity(SmmError):
    pass


class SignPatternViolation(SmmError):
    pass


class DegenerateInterpolation(SmmError):
    pass


class InfeasibleEpsilon(SmmError):
    pass


# product embedding
class InvalidFlag(SmmError):
    pass


class NotAProduct(SmmError):
    pass


# file format
class ParseError(SmmError):
    """Malformed model file. ``line`` and ``column`` are 1-based."""

    def __init__(self, message, line, column=1):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column


class ConstraintViolation(SmmError):
    pass
