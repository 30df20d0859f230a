"""Exception hierarchy.

Everything raised on purpose by the package derives from
:class:`PlanarInvError`, so callers can catch one type.
"""


class PlanarInvError(Exception):
    pass


class MalformedCurve(PlanarInvError, ValueError):
    """Point list does not describe a polyline immersion."""


class NotStable(PlanarInvError):
    """Curve has non-generic self-intersections."""

    def __init__(self, report):
        self.report = report
        super().__init__("curve is not stable: " + "; ".join(report.violations))


class DegenerateIntersection(PlanarInvError):
    pass


class NonIntegerTurning(PlanarInvError):
    pass


class BasePointOnCurve(PlanarInvError):
    pass


class EpsilonTooLarge(PlanarInvError):
    pass


class NonOddBottomIndex(PlanarInvError):
    pass


class GradingViolation(PlanarInvError):
    pass


class WrongKind(PlanarInvError, TypeError):
    pass


class ParseError(PlanarInvError, ValueError):
    pass


class SiteInvalid(PlanarInvError):
    pass


class StabilityLost(PlanarInvError):
    pass


class WindowMisaligned(PlanarInvError):
    pass
