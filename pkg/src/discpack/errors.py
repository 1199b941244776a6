"""Exception hierarchy.

Everything raised on bad domain input derives from :class:`DiscpackError`,
so callers (and the CLI) can catch one type. Parse failures of the text
formats raise :class:`FormatError`.
"""


class DiscpackError(Exception):
    """Base class for all domain errors raised by this package."""


# -- triangulation construction ------------------------------------------

class InvalidFace(DiscpackError):
    """Face is not a triple of three distinct non-negative vertex ids."""


class NonManifoldEdge(DiscpackError):
    """An edge is shared by more than two faces."""


class OrientationConflict(DiscpackError):
    """Two faces induce the same direction on a shared edge."""


class Disconnected(DiscpackError):
    """The face set does not form a connected complex."""


class NotADisc(DiscpackError):
    """The complex is not a triangulation of a disc."""


class DanglingVertex(DiscpackError):
    """A vertex id in the dense range belongs to no face."""


class InvalidDegree(DiscpackError):
    """Generator parameter below its minimum."""


class UnknownVertex(DiscpackError):
    """Vertex id outside the complex."""


# -- labels and the boundary-value solver ---------------------------------

class DegenerateFace(DiscpackError):
    """Angle argument left [-1, 1] by more than rounding slack."""


class BoundaryVertex(DiscpackError):
    """Angle sums are defined at interior vertices only."""


class BranchOnBoundary(DiscpackError):
    """Branch vertices must be interior."""


class InfeasibleOrder(DiscpackError):
    """Branch order puts the target at or above the angle-sum supremum."""


class InfeasibleTarget(DiscpackError):
    """A target angle sum is not attainable for the vertex degree."""


class NotConverged(DiscpackError):
    """Solver hit the sweep limit before reaching tolerance."""

    def __init__(self, report):
        super().__init__(
            f"no convergence after {report.iterations} sweeps "
            f"(max residual {report.max_residual:.3e})"
        )
        self.report = report


class HypothesisNotMet(DiscpackError):
    """A comparison's subpacking premise fails."""


# -- layout ----------------------------------------------------------------

class MismatchedComplex(DiscpackError):
    """Two labels do not live on the same complex."""


class UnplacedFace(DiscpackError):
    """Layout could not reach every face (should be impossible after validation)."""


# -- networks --------------------------------------------------------------

class IsolatedVertex(DiscpackError):
    """A vertex with no incident conductance cannot carry a kernel row."""


class MissingValues(DiscpackError):
    """A per-vertex function lacks values on a required neighborhood."""


class SingularSystem(DiscpackError):
    """Dirichlet system is singular (root and boundary not connected)."""


class EdgeSetMismatch(DiscpackError):
    """Conductance comparison requires identical edge sets."""


# -- variation --------------------------------------------------------------

class NotAStar(DiscpackError):
    """Operation requires a star complex (one interior hub, vertex 0)."""


class StepTooLarge(DiscpackError):
    """Finite-difference step leaves the positive-radius domain."""


# -- text formats ------------------------------------------------------------

class FormatError(DiscpackError):
    """Malformed `.cpx`, `.lbl`, or `.brs` content."""


class IoFailure(DiscpackError):
    """Underlying file write failed."""
