"""Exception hierarchy shared by every module in the package."""


class ForestError(Exception):
    """Base class for all errors raised by rcforest."""


class InvalidVertex(ForestError, ValueError):
    def __init__(self, vertex, n=None):
        self.vertex = vertex
        msg = f"vertex {vertex!r} out of range" + (f" [0, {n})" if n is not None else "")
        super().__init__(msg)


class ValidationError(ForestError, ValueError):
    """A batch edit would not leave a simple bounded-degree forest."""

    def __init__(self, message, *, edge=None, vertex=None):
        self.edge = edge
        self.vertex = vertex
        super().__init__(message)


class CycleError(ValidationError):
    def __init__(self, edge):
        super().__init__(f"inserting {edge} closes a cycle", edge=edge)


class DegreeOverflow(ValidationError):
    def __init__(self, vertex, degree, t):
        super().__init__(f"vertex {vertex} would have degree {degree} > {t}", vertex=vertex)


class MissingEdge(ValidationError):
    def __init__(self, edge):
        super().__init__(f"edge {edge} is not in the forest", edge=edge)


class DuplicateEdge(ValidationError):
    def __init__(self, edge, reason="duplicate"):
        super().__init__(f"edge {edge}: {reason}", edge=edge)


class DeadVertex(ForestError, LookupError):
    def __init__(self, vertex, round_):
        self.vertex = vertex
        self.round = round_
        super().__init__(f"vertex {vertex} is not live at round {round_}")


class MalformedChain(ForestError, ValueError):
    pass


class InvariantError(ForestError, AssertionError):
    """A structural invariant was violated (raised by debug-mode checks)."""


class NotIndependent(InvariantError):
    pass


class NotMaximal(InvariantError):
    pass


class AffectedBoundExceeded(InvariantError):
    pass


class QueryError(ForestError, ValueError):
    pass


class NotConnected(QueryError):
    def __init__(self, u, v):
        super().__init__(f"{u} and {v} are in different trees")


class NotAdjacent(QueryError):
    def __init__(self, u, v):
        super().__init__(f"{u} and {v} are not adjacent")


class SameVertex(QueryError):
    def __init__(self, v):
        super().__init__(f"query needs two distinct vertices, got {v} twice")
