"""Exception types shared across the geometry modules."""


class GeometryError(Exception):
    """Base class for all geometry failures raised by this package."""


class DegenerateBody(GeometryError):
    """Input does not span a genuine 2-dimensional convex body."""


class NumericallySingularEdge(GeometryError):
    """An edge system is too ill-conditioned to produce a reliable polar vertex."""


class SingularMatrix(GeometryError):
    """A required 2x2 linear system has no usable inverse."""


class NoConvergence(GeometryError):
    """An iterative solver hit its iteration cap before reaching tolerance."""


class DomainError(GeometryError):
    """Argument lies outside the mathematical domain of the function."""


class AlreadyOrthogonal(GeometryError):
    """The sector frame is already right-angled, nothing to widen."""


class PointNotInterior(GeometryError):
    """A point that must lie strictly inside a cone or body does not."""


class HypothesisViolated(GeometryError):
    """A vertex move violates the preconditions that guarantee improvement."""


class ParallelSupportLines(GeometryError):
    """Adjacent support lines are parallel, their intersection is undefined."""
