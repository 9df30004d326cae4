"""Exception hierarchy shared by every module."""


class GraphManifoldError(Exception):
    """Base class for all errors raised by gm4."""


class NotASubgroup(GraphManifoldError):
    pass


class NotUnimodular(GraphManifoldError):
    pass


class InvalidBasisChange(GraphManifoldError):
    pass


class ParseError(GraphManifoldError):
    """Malformed manifold document."""


class InvalidManifold(GraphManifoldError):
    """Raised when an operation needs a valid manifold and the input fails validation."""

    def __init__(self, report):
        super().__init__(f"invalid graph-manifold: {report.summary()}")
        self.report = report


class RankViolation(GraphManifoldError):
    pass


class BadPermutation(GraphManifoldError):
    pass


class BudgetExceeded(GraphManifoldError):
    pass


class PreconditionFailed(GraphManifoldError):
    """A construction was asked to run on data outside its hypotheses."""

    def __init__(self, message, location=None):
        super().__init__(message)
        self.location = location


class TypeObstruction(PreconditionFailed):
    """A vertex has the wrong type for the requested operation."""

    def __init__(self, vertex, vertex_type, message=None):
        super().__init__(message or f"vertex {vertex} has type {vertex_type}", vertex)
        self.vertex = vertex
        self.vertex_type = vertex_type


class TypeTooLarge(TypeObstruction):
    pass


class SecondaryIndexObstruction(PreconditionFailed):
    def __init__(self, vertex, j):
        super().__init__(f"vertex {vertex} has secondary intersection number {j}", vertex)
        self.vertex = vertex
        self.j = j


class NotApplicable(GraphManifoldError):
    """The orthogonality criterion only covers manifolds whose blocks all have type 2."""

    def __init__(self, vertex, vertex_type):
        super().__init__(f"criterion needs type 2 everywhere; vertex {vertex} has type {vertex_type}")
        self.vertex = vertex
        self.vertex_type = vertex_type


class InternalAssertionError(GraphManifoldError):
    """A recomputed invariant disagreed with what a construction guarantees."""

    def __init__(self, message, ledger=None):
        super().__init__(message)
        self.ledger = ledger


class SplitFailure(InternalAssertionError):
    pass


class DegenerateGluing(InternalAssertionError):
    pass
