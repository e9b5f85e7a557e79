"""Exceptions raised by the engine."""


class DGError(Exception):
    """Base class for engine errors carried into reports."""


class WindowViolation(DGError):
    pass


class WindowInfeasible(DGError):
    pass


class InfiniteRank(DGError):
    pass


class MapMismatch(DGError):
    pass


class NotKFlat(DGError):
    pass


class NotRegularRing(DGError):
    pass


class UnboundedAbove(DGError):
    pass


class UnsupportedRing(DGError):
    pass


class UnsupportedSmoothShape(DGError):
    pass


class NotCohFinite(DGError):
    pass


class UnsupportedMap(DGError):
    pass
