"""Exception types raised across the package."""


class HgrecError(Exception):
    """Base class for all package errors."""


class GraphBuildError(HgrecError):
    """Invalid hypergraph construction input."""


class OrphanVertexError(GraphBuildError):
    """A declared vertex belongs to no hyperedge, so its degree
    normalization would be undefined."""

    def __init__(self, vertex):
        self.vertex = vertex
        super().__init__(f"vertex {vertex} belongs to no hyperedge")


class UnknownVertexError(GraphBuildError):
    """A hyperedge references a vertex that was never declared."""

    def __init__(self, vertex, edge_id):
        self.vertex = vertex
        self.edge_id = edge_id
        super().__init__(f"hyperedge {edge_id} references undeclared vertex {vertex}")


class EmptyHyperedgeError(GraphBuildError):
    def __init__(self, edge_id):
        self.edge_id = edge_id
        super().__init__(f"hyperedge {edge_id} has no members")


class DimensionMismatchError(HgrecError):
    def __init__(self, expected, got):
        super().__init__(f"expected vector of length {expected}, got {got}")


class NonConvergenceError(HgrecError):
    """The fixed-point solver failed to reach tolerance. Since the
    iteration is a contraction on any valid graph, this signals a
    broken adjacency operator rather than a hard problem instance."""

    def __init__(self, iterations, residual):
        self.iterations = iterations
        self.residual = residual
        super().__init__(
            f"no convergence after {iterations} iterations (residual {residual:.3e})"
        )


class MissingRelevanceError(HgrecError):
    """Fair query adaptation requested without relevance scores."""


class EmptyConfigError(HgrecError):
    """Edge-kind selection is empty; no hypergraph can be assembled."""


class NoEvaluableUsersError(HgrecError):
    """No user has a held-out set, so precision is undefined."""


class EmptyRecommendationsError(HgrecError):
    """Popularity-deviation metric needs at least one recommendation slot."""


class ParseError(HgrecError):
    """A data file line failed to parse."""

    def __init__(self, path, line_number, reason):
        self.path = path
        self.line_number = line_number
        self.reason = reason
        super().__init__(f"{path}:{line_number}: {reason}")


class UnknownUserError(HgrecError):
    def __init__(self, user_id):
        self.user_id = user_id
        super().__init__(f"unknown user id: {user_id!r}")


class MissingMetricsError(HgrecError):
    """Report generation requested but no metrics file is present."""


class ConfigError(HgrecError):
    """Run configuration failed validation."""
