"""Exception types shared across the package."""


class GridTreeError(Exception):
    """Base class for all library errors."""


class MalformedGraphError(GridTreeError, ValueError):
    """Graph construction input violates an invariant (self-loop, bad endpoint, ...)."""


class UnknownEdgeError(GridTreeError, KeyError):
    """An edge id does not exist in the graph."""


class InfeasibleConstraintError(GridTreeError, ValueError):
    """A required edge set cannot be part of any spanning tree (it contains a cycle)."""


class NotASpanningTreeError(GridTreeError, ValueError):
    """An operation expected a spanning tree and got something else."""


class InvalidPlacementError(GridTreeError, ValueError):
    """Sensor placement does not leave a spanning tree behind (decoding system singular)."""


class UnsupportedPlacementError(GridTreeError, ValueError):
    """Placement shape not supported by this detector (e.g. more sensors than the minimum)."""


class InconsistentObservationError(GridTreeError, ValueError):
    """Measured flows cannot be produced by any spanning tree under the given loads."""


class NoFeasibleHypothesisError(GridTreeError, ValueError):
    """Every candidate tree was ruled out (all likelihoods are -inf)."""


class ModelError(GridTreeError, ValueError):
    """Load/noise model violates its contract (negative variance, bad domain, ...)."""


class GraphFormatError(GridTreeError, ValueError):
    """A text input file could not be parsed; message carries the line number."""


class InternalInvariantError(GridTreeError, RuntimeError):
    """A state the algorithms prove impossible was reached; indicates a bug."""
