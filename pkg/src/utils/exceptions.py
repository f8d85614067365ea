"""
Exceptions

Error hierarchy shared by the library and the command-line interface.
"""

from typing import Optional


class GramSqrtError(Exception):
    """Base class for every error raised by the package."""

    exit_code = 1


class DimensionMismatchError(GramSqrtError, ValueError):
    """Operands with non-conformable shapes."""

    exit_code = 2


class NotSymmetricError(GramSqrtError, ValueError):
    """A matrix expected to be symmetric is not."""

    exit_code = 3


class NotPositiveDefiniteError(GramSqrtError, ValueError):
    """A matrix expected to be SPD has a nonpositive eigenvalue or curvature."""

    exit_code = 3


class ConvergenceError(GramSqrtError, RuntimeError):
    """
    An iterative kernel stopped without meeting its tolerance.

    The best estimate reached so far is kept so callers can still inspect it.
    """

    exit_code = 4

    def __init__(
        self,
        message: str,
        estimate: Optional[object] = None,
        residual: Optional[float] = None,
        iterations: Optional[int] = None,
    ):
        super().__init__(message)
        self.estimate = estimate
        self.residual = residual
        self.iterations = iterations


class UnsupportedClassError(GramSqrtError, ValueError):
    """An n0 class (or order) outside the tabulated Chebyshev data."""

    exit_code = 5


class UnavailableOrderError(GramSqrtError, LookupError):
    """The truncation-order table has no entry for the requested accuracy."""

    exit_code = 5


class N0ClassViolationError(GramSqrtError, ValueError):
    """The scaled spectrum reaches below the bound of the chosen n0 class."""

    exit_code = 5


class MeshError(GramSqrtError, ValueError):
    """Base class for mesh ingestion and validation failures."""

    exit_code = 6


class MeshParseError(MeshError):
    """Malformed OFF file."""


class NonManifoldEdgeError(MeshError):
    """An edge shared by more than two triangles."""


class InconsistentOrientationError(MeshError):
    """Neighbouring triangles traverse their shared edge in the same direction."""


class DegenerateTriangleError(MeshError):
    """A triangle with (numerically) zero area or repeated vertices."""


class NonManifoldVertexError(MeshError):
    """A vertex whose incident triangles do not form a single edge-connected fan."""
