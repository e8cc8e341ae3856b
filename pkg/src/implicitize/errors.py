"""Exception types raised by the library."""


class ImplicitizeError(Exception):
    pass


class DomainError(ImplicitizeError, ValueError):
    """A parameter lies outside the domain of the operation."""


class DegreeError(ImplicitizeError, ValueError):
    """Requested degree or size exceeds a supported cap."""


class FrameError(ImplicitizeError, ValueError):
    """Degenerate barycentric frame."""


class SolverError(ImplicitizeError, RuntimeError):
    """SVD or eigendecomposition failed to converge."""
