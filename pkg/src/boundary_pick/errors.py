"""Exception hierarchy."""


class BoundaryPickError(Exception):
    """Base class for every error raised by this package."""


class NotHermitian(BoundaryPickError):
    pass


class Singular(BoundaryPickError):
    pass


class SingularPick(Singular):
    """The Pick matrix is singular; use the degenerate solver instead."""


class SingularLeadingBlock(Singular):
    pass


class NotSingular(BoundaryPickError):
    """The Pick matrix is invertible; the degenerate solver does not apply."""


class NotPositive(BoundaryPickError):
    pass


class ZeroPolynomial(BoundaryPickError):
    pass


class BoundaryPole(BoundaryPickError):
    """A pole sits too close to the unit circle to be classified."""


class DegenerateDenominator(BoundaryPickError):
    pass


class NotInnerRatio(BoundaryPickError):
    """The rational function is not unimodular on the unit circle."""


class DataInvalid(BoundaryPickError):
    pass


class DataInconsistent(BoundaryPickError):
    pass


class MuCollidesWithNode(BoundaryPickError):
    pass


class AtPole(BoundaryPickError):
    pass


class OnDiagonalSingularity(BoundaryPickError):
    pass


class PoleAtNode(BoundaryPickError):
    pass


class NotSchur(BoundaryPickError):
    """A parameter fails the Schur class membership check."""


class AmbiguousBoundary(BoundaryPickError):
    """Estimated boundary data cannot separate neighbouring conditions."""


class PivotFailure(BoundaryPickError):
    pass


class RatioInconsistent(BoundaryPickError):
    pass
