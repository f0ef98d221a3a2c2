"""Exception hierarchy shared by all modules."""

from __future__ import annotations


class SemifactError(Exception):
    """Base class for every error raised by this package."""


class GraphError(SemifactError, ValueError):
    """Malformed graph input."""


class DisconnectedGraph(GraphError):
    pass


class DanglingEndpoint(GraphError):
    pass


class DuplicateId(GraphError):
    pass


class InvalidLabel(GraphError):
    pass


class UnknownEdge(GraphError, KeyError):
    def __str__(self) -> str:  # KeyError quotes its message otherwise
        return Exception.__str__(self)


class NotASpanningTree(GraphError):
    pass


class CircuitCapExceeded(SemifactError):
    pass


class InfiniteLabelPresent(SemifactError, ValueError):
    pass


class DimensionMismatch(SemifactError, ValueError):
    pass


class NotCartier(SemifactError, ValueError):
    pass


class NotABlowupOf(SemifactError, ValueError):
    pass


class SupportConditionViolated(SemifactError, ValueError):
    pass


class ParseError(SemifactError):
    """Document is not valid JSON or does not follow the graph schema."""


class ValidationError(SemifactError):
    """Document parses but does not describe a valid labelled graph."""
