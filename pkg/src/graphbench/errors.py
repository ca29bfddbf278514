"""Exception types shared across the package."""


class GraphBenchError(Exception):
    """Base class for all graphbench errors."""


class InvalidN(GraphBenchError):
    """Node count below the minimum a generator family supports."""


class DisconnectedGraph(GraphBenchError):
    """Operation requires a connected graph."""


class TooLarge(GraphBenchError):
    """Graph exceeds the configured node cap for an exact solver."""


class ExhaustedAttempts(GraphBenchError):
    """Resampling loop hit its attempt budget."""


class MalformedInput(GraphBenchError):
    """Unparseable serialized graph text; message carries a diagnostic."""

    def __init__(self, message: str, position: int | None = None):
        if position is not None:
            message = f"{message} (at offset {position})"
        super().__init__(message)
        self.position = position


class MissingParam(GraphBenchError):
    """Task question requires a node parameter that was not supplied."""


class EmptyBank(GraphBenchError):
    """Shot-bearing prompt scheme composed with an empty exemplar bank."""


class MixedTasks(GraphBenchError):
    """Baseline corpus mixes more than one task."""


class RateLimited(GraphBenchError):
    """Endpoint returned a rate-limit response."""


class TransportError(GraphBenchError):
    """Network-level failure talking to the endpoint."""


class MalformedResponse(GraphBenchError):
    """Endpoint response missing required fields."""


class EmptyFactor(GraphBenchError):
    """Factor space contains an empty dimension."""


class ZeroDenominator(GraphBenchError):
    """Rate computation with a non-positive reference accuracy."""


class EmptyGroup(GraphBenchError):
    """Aggregation over an empty record set."""


class InsufficientCoverage(GraphBenchError):
    """Sensitivity analysis needs at least two schemes and two formats."""
