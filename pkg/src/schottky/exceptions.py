"""Exception hierarchy.

Every numerical failure derives from :class:`NumericalError` so that callers
(notably the command line front end) can map it to a single exit code.
"""


class SchottkyError(Exception):
    pass


class ValidationError(SchottkyError, ValueError):
    """Input does not satisfy a precondition (bad shape, Im Z not PD, ...)."""


class NumericalError(SchottkyError, ArithmeticError):
    pass


class SingularFactor(NumericalError):
    pass


class NonConvergent(NumericalError):
    """Lattice sum would need a summation radius above the configured cap."""


class CostCapExceeded(SchottkyError):
    pass


class IntegerOverflow(SchottkyError, OverflowError):
    pass


class NotOnLocus(SchottkyError):
    pass


class OnHyperellipticLocus(SchottkyError):
    pass


class GradientDegenerate(NumericalError):
    pass


class LeftSiegelSpace(NumericalError):
    pass


class MaxIterReached(NumericalError):
    pass


class NotFound(NumericalError):
    pass


class ZeroMatrix(SchottkyError, ValueError):
    pass


class SingularInput(SchottkyError, ValueError):
    pass


class QuadratureNotConverged(NumericalError):
    pass


class NotSymmetric(NumericalError):
    pass


class NotPositiveDefinite(NumericalError):
    pass


class AmbiguousSplit(NumericalError):
    pass
