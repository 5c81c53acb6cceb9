"""Exception and warning types raised across the package."""


class ShearCSTError(Exception):
    """Base class for all package errors."""


class OffGridShift(ShearCSTError):
    """A group action would move samples off the grid."""


class GridMismatch(ShearCSTError):
    """Operands are sampled on incompatible grids."""


class InsufficientSlices(ShearCSTError):
    """An x2-derivative was requested on a volume with fewer than five slices."""


class DomainTooNarrow(ShearCSTError):
    """A sampled function is not negligible at the edge of its grid."""


class SqueezeOutOfRange(ShearCSTError):
    """The squeeze parameter leaves the analytic-extension disc of the seed."""


class KernelDivergent(ShearCSTError):
    """The heat kernel grows along the integration contour."""


class CenterPoint(ShearCSTError):
    """u = 0: the Cayley image sits at the origin and there are no jumps."""


class DegreeTooHigh(ShearCSTError):
    """Requested eigenmode degree exceeds the supported range."""


class ConfigInvalid(ShearCSTError):
    """A run configuration is malformed."""


class BoundaryMassWarning(UserWarning):
    """Sampled data carries non-negligible mass at the domain boundary."""
