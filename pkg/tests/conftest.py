import numpy as np
import pytest

from hgrec.data import SyntheticConfig, generate_synthetic
from hgrec.hypergraph import (
    EdgeKind,
    Hyperedge,
    VertexId,
    VertexKind,
    build_hypergraph,
)


def make_vertices(n, kinds=None):
    """n vertices with the given kinds (default all users), local indices
    assigned per kind in order."""
    kinds = kinds or [VertexKind.USER] * n
    counters = {}
    out = []
    for g, kind in enumerate(kinds):
        local = counters.get(kind, 0)
        counters[kind] = local + 1
        out.append(VertexId(kind=kind, index=local, global_index=g))
    return out


def make_edge(edge_id, members, weight=1.0, kind=EdgeKind.E3):
    return Hyperedge(id=edge_id, members=frozenset(members), weight=weight, kind=kind)


def random_hypergraph(rng, max_vertices=60, max_edges=40, unit_weights=True):
    """Random connected-enough hypergraph; every vertex covered."""
    n_v = int(rng.integers(2, max_vertices + 1))
    n_e = int(rng.integers(1, max_edges + 1))
    edges = []
    covered = set()
    for j in range(n_e):
        size = int(rng.integers(1, min(6, n_v) + 1))
        members = rng.choice(n_v, size=size, replace=False)
        covered.update(int(m) for m in members)
        weight = 1.0 if unit_weights else float(rng.uniform(0.5, 2.0))
        edges.append(make_edge(j, (int(m) for m in members), weight=weight))
    uncovered = sorted(set(range(n_v)) - covered)
    if uncovered:
        edges.append(make_edge(n_e, uncovered))
    return build_hypergraph(make_vertices(n_v), edges)


def dense_adjacency(h):
    """Independent dense evaluation of the normalized adjacency."""
    H = h.incidence.toarray()
    w = np.array([e.weight for e in h.hyperedges])
    dv = H @ w
    de = H.sum(axis=0)
    inv_sqrt_dv = np.diag(1.0 / np.sqrt(dv))
    return inv_sqrt_dv @ H @ np.diag(w) @ np.diag(1.0 / de) @ H.T @ inv_sqrt_dv


def two_vertex_graph():
    """Two users sharing one unit edge: adjacency [[.5,.5],[.5,.5]]."""
    return build_hypergraph(make_vertices(2), [make_edge(0, [0, 1])])


@pytest.fixture(scope="session")
def tiny_dataset():
    """Small synthetic dataset that still yields evaluable users in
    every one of four rounds."""
    config = SyntheticConfig(
        n_users=130,
        n_articles=80,
        n_authors=14,
        n_topics=40,
        timespan_days=8,
        popularity_exponent=1.2,
        seed=11,
        heavy_user_fraction=0.12,
    )
    return generate_synthetic(config)
