"""Exception hierarchy shared by all hypsweep modules.

Every domain error derives from :class:`HypsweepError` so the CLI can map
them uniformly to exit code 1 with a structured JSON payload.
"""


class HypsweepError(Exception):
    """Base class for all domain errors raised by this package."""

    def payload(self):
        """Structured description used for JSON error output."""
        return {"error": type(self).__name__, "message": str(self)}


# ---------------------------------------------------------------- geometry

class DegenerateCorner(HypsweepError):
    """A corner angle was requested at a corner with a side shorter than 1e-12."""


class NegativeRadius(HypsweepError):
    """A radius argument was negative."""


class NegativeArea(HypsweepError):
    """An area argument was negative."""


class OutOfRange(HypsweepError):
    """A scalar argument fell outside its documented domain."""


# ------------------------------------------------------------ triangulation

class InvalidGenus(HypsweepError):
    """Genus arguments must be integers >= 1."""


class BadEdgeId(HypsweepError):
    """Edge id outside [0, E) or not present in the triangulation."""


class NotFlippable(HypsweepError):
    """The edge has both darts in a single triangle, so the flip square degenerates."""


class GenusMismatch(HypsweepError):
    """Flip distance requires both triangulations to have the same genus."""


class BudgetExceeded(HypsweepError):
    """A graph search hit its node budget; the result is inconclusive, not infinite."""

    def __init__(self, message, nodes_explored=None):
        super().__init__(message)
        self.nodes_explored = nodes_explored

    def payload(self):
        out = super().payload()
        if self.nodes_explored is not None:
            out["nodes_explored"] = self.nodes_explored
        return out


class InvalidTriangulation(HypsweepError):
    """Raised when loading or constructing a combinatorial map that fails validation."""


# ------------------------------------------------------------ coned surfaces

class RelationViolated(HypsweepError):
    """A triangle's boundary holonomy word does not multiply to the identity."""

    def __init__(self, triangle, residual):
        super().__init__(
            f"triangle {triangle}: holonomy word residual {residual:.3e} exceeds tolerance"
        )
        self.triangle = triangle
        self.residual = residual

    def payload(self):
        out = super().payload()
        out["triangle"] = self.triangle
        out["residual"] = self.residual
        return out


class NotAdjacent(HypsweepError):
    """The edge does not bound the given triangle, or does not bound two distinct ones."""


class DegenerateEdge(HypsweepError):
    """The edge geodesic has length below 1e-12; there is nothing to slide along."""


class NotInterpolable(HypsweepError):
    """No admissible side triangle exists for the flip interpolation at this edge."""


# ------------------------------------------------------------- isoperimetric

class OpenRegion(HypsweepError):
    """A disc-type profile must run from the rotation axis to the ball boundary."""


class NonConvergence(HypsweepError):
    """The optimizer exhausted its iteration budget before meeting tolerances."""

    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report

    def payload(self):
        out = super().payload()
        if self.report is not None:
            out["report"] = self.report
        return out


class InfeasibleStart(HypsweepError):
    """The optimizer's initial profile violates a structural requirement."""


# ----------------------------------------------------------------------- cli

class UsageError(Exception):
    """Bad command line; maps to exit code 2. Not a domain error."""
