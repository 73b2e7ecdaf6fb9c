"""Exception hierarchy shared by every module.

All domain errors derive from :class:`PickDirichletError` so the CLI can map
them to exit code 1 in one place.
"""


class PickDirichletError(ValueError):
    """Base class for domain errors."""


class NonUnitError(PickDirichletError):
    """Leading coefficient a_1 is zero, so the series has no inverse."""


class ModeError(PickDirichletError):
    """Requested scalar mode cannot represent the values exactly."""


class DomainError(PickDirichletError):
    """Argument lies outside the region where the object is defined."""


class DepthError(PickDirichletError):
    """Truncation depth too small for the requested check or tolerance."""


class SupportError(PickDirichletError):
    """A series has a coefficient outside the span of the embedding generators."""


class NotPickError(PickDirichletError):
    """Kernel fails the complete Pick coefficient test."""


class ZeroKernelError(PickDirichletError):
    """A kernel value vanishes (within tolerance) where it must not."""


class ConvergenceError(PickDirichletError):
    """Iterative eigenvalue scheme hit its sweep limit."""


class ShapeError(PickDirichletError):
    """Matrix or block dimensions are inconsistent."""
