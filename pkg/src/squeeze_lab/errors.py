"""Exception hierarchy.

``DomainError`` subclasses signal violated preconditions (the CLI maps them
to exit code 3); the rest signal numerical outcomes a caller may want to
handle separately.
"""


class SqueezeLabError(Exception):
    """Base class for all package errors."""


class DomainError(SqueezeLabError, ValueError):
    """An input lies outside the domain of the operation."""


class OutOfDomain(DomainError):
    pass


class ArityMismatch(DomainError):
    pass


class PoleProximity(DomainError):
    """``tan(sqrt(a))/sqrt(a)`` requested too close to one of its poles."""

    def __init__(self, a, cvalue):
        super().__init__(
            f"a={a!r} is within the pole guard of tan(sqrt(a))/sqrt(a) "
            f"(|cos sqrt(a)| = {abs(cvalue):.3g}); use the cleared residual form"
        )
        self.a = a


class DegenerateDenominator(DomainError, ZeroDivisionError):
    """A closed-form expression divides by (numerically) zero."""

    def __init__(self, message, denominator=None):
        super().__init__(message)
        self.denominator = denominator


class OffSet(DomainError):
    """The intensities do not lie on the resonance set the formula needs."""


class NonUnimodular(DomainError):
    pass


class NotConvergedInput(DomainError):
    pass


class NoRootInInterval(SqueezeLabError):
    pass


class Inconclusive(SqueezeLabError):
    """Trace neither contracts to a limit nor follows a clean power law."""


class AmbiguousMembership(SqueezeLabError):
    """Residual falls in the band between ``tol`` and ``10*tol``."""


class BothFormsDegenerate(SqueezeLabError):
    pass
