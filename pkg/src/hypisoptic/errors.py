"""Exception hierarchy shared by all modules."""


class GeometryError(ValueError):
    """Base class for domain errors (CLI maps these to exit status 1)."""


class NonProperPoint(GeometryError):
    pass


class PreconditionViolated(GeometryError):
    pass


class UnclassifiableParameters(GeometryError):
    pass


class DivisionByZeroParameter(GeometryError):
    pass


class SingularConic(GeometryError):
    pass


class IdealPoint(GeometryError):
    pass


class NotExternalPoint(GeometryError):
    """No real tangent lines pass through the query point."""


class NoRealTangent(NotExternalPoint):
    """Raised by the generic pencil solver; a `NotExternalPoint` subtype."""


class DegenerateDenominator(GeometryError):
    pass


class SingularDenominator(GeometryError):
    pass


class InvalidRegion(GeometryError):
    pass


class UndefinedAngle(GeometryError):
    pass
