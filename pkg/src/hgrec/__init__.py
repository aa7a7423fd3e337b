"""Multi-stakeholder news recommendation via hypergraph ranking.

Builds one unified hypergraph over users, articles, authors and topics,
ranks by a Laplacian-regularized closed form, and runs time-sliced
simulation rounds in which stakeholder weights in the query vector adapt
to improve provider coverage fairness or topical diversity.
"""

from .builder import GraphConfig, VertexIndex, assemble, build_edges_E1_to_E4, build_knn_edges
from .config import RunConfig
from .data import (
    ArticleCatalog,
    InteractionLog,
    SyntheticConfig,
    generate_synthetic,
    load,
    write_dataset,
)
from .diversity import diversify_query
from .fairness import AuthorStats, build_adapted_query, coverage_weights, update_coverage
from .hypergraph import (
    EdgeKind,
    Hyperedge,
    Hypergraph,
    VertexId,
    VertexKind,
    adjacency,
    build_hypergraph,
    laplacian_quadratic,
)
from .metrics import (
    AuthorGroups,
    covered_topics,
    eagf,
    precision_at_k,
    spd,
    split_groups,
)
from .ranking import (
    QueryVector,
    ScoreVector,
    author_relevance,
    extract_scores,
    solve,
    solve_columns,
)
from .simulation import (
    MetricsRow,
    RoundPlan,
    carve_round,
    coverage_rerank,
    plan_rounds,
    run_experiment,
    run_round,
)
from .state import RoundState

__version__ = "0.1.0"

__all__ = [
    "ArticleCatalog",
    "AuthorGroups",
    "AuthorStats",
    "EdgeKind",
    "GraphConfig",
    "Hyperedge",
    "Hypergraph",
    "InteractionLog",
    "MetricsRow",
    "QueryVector",
    "RoundPlan",
    "RoundState",
    "RunConfig",
    "ScoreVector",
    "SyntheticConfig",
    "VertexId",
    "VertexIndex",
    "VertexKind",
    "adjacency",
    "assemble",
    "author_relevance",
    "build_adapted_query",
    "build_edges_E1_to_E4",
    "build_hypergraph",
    "build_knn_edges",
    "carve_round",
    "coverage_rerank",
    "coverage_weights",
    "covered_topics",
    "diversify_query",
    "eagf",
    "extract_scores",
    "generate_synthetic",
    "laplacian_quadratic",
    "load",
    "plan_rounds",
    "precision_at_k",
    "run_experiment",
    "run_round",
    "solve",
    "solve_columns",
    "spd",
    "split_groups",
    "update_coverage",
    "write_dataset",
]
