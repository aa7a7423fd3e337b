"""Hyperedge construction from an interaction log and article catalog.

Six hyperedge families connect the entities:

    E1  article + its topics + the users who read it
    E2  article + its authors + the users who read it
    E3  user + every article the user read
    E4  article + its standardized press tags
    E5  user + its k most cosine-similar users (binary interaction rows)
    E6  article + its k most cosine-similar articles (embeddings)

Articles in scope are those occurring in the log; repeated reads of the
same (user, article) pair collapse to one membership since incidence is
binary. Vertices are derived from the built edges, so every vertex has
positive degree by construction.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np

from .data import ArticleCatalog, InteractionLog
from .errors import EmptyConfigError, GraphBuildError
from .hypergraph import (
    KIND_ORDER,
    EdgeKind,
    Hyperedge,
    Hypergraph,
    VertexId,
    VertexKind,
    build_hypergraph,
)

log = logging.getLogger(__name__)

ALL_EDGE_KINDS = (EdgeKind.E1, EdgeKind.E2, EdgeKind.E3, EdgeKind.E4, EdgeKind.E5, EdgeKind.E6)

# entity = (kind, dataset index); edges are symbolic until interned
Entity = tuple[VertexKind, int]


@dataclass(frozen=True)
class GraphConfig:
    """Edge-kind selection and nearest-neighbor sizes."""

    edges: tuple[EdgeKind, ...] = ALL_EDGE_KINDS
    knn_k_users: int = 10
    knn_k_articles: int = 10

    @classmethod
    def from_names(cls, names, knn_k_users: int = 10, knn_k_articles: int = 10) -> "GraphConfig":
        kinds = tuple(EdgeKind(name) for name in names)
        return cls(edges=kinds, knn_k_users=knn_k_users, knn_k_articles=knn_k_articles)


class VertexIndex:
    """Bidirectional map between (kind, dataset index) entities and the
    contiguous global vertex numbering of one hypergraph.

    Global order is by kind block (users, articles, authors, topics,
    tags), ascending dataset index inside each block.
    """

    def __init__(self, entities: set[Entity]):
        ordered = sorted(entities, key=lambda e: (KIND_ORDER[e[0]], e[1]))
        self._global_of: dict[Entity, int] = {e: g for g, e in enumerate(ordered)}
        self._entities: list[Entity] = ordered
        self.by_kind: dict[VertexKind, np.ndarray] = {}
        for kind in VertexKind:
            self.by_kind[kind] = np.array(
                [e[1] for e in ordered if e[0] is kind], dtype=np.int64
            )

    def __len__(self) -> int:
        return len(self._entities)

    def __contains__(self, entity: Entity) -> bool:
        return entity in self._global_of

    def global_index(self, kind: VertexKind, dataset_index: int) -> int:
        return self._global_of[(kind, dataset_index)]

    def entity(self, global_index: int) -> Entity:
        return self._entities[global_index]

    def dataset_indices(self, kind: VertexKind) -> np.ndarray:
        """Dataset indices of this kind, in global-vertex order."""
        return self.by_kind[kind]

    def vertex_ids(self) -> list[VertexId]:
        counters = {kind: 0 for kind in VertexKind}
        out = []
        for g, (kind, _) in enumerate(self._entities):
            out.append(VertexId(kind=kind, index=counters[kind], global_index=g))
            counters[kind] += 1
        return out


def _reader_map(interactions: InteractionLog) -> tuple[dict[int, list[int]], dict[int, list[int]]]:
    """Deduplicated readers per article and articles per user."""
    readers: dict[int, set[int]] = {}
    reads: dict[int, set[int]] = {}
    for u, a in zip(interactions.user, interactions.article):
        readers.setdefault(int(a), set()).add(int(u))
        reads.setdefault(int(u), set()).add(int(a))
    return (
        {a: sorted(us) for a, us in sorted(readers.items())},
        {u: sorted(ar) for u, ar in sorted(reads.items())},
    )


def build_edges_E1_to_E4(
    interactions: InteractionLog,
    catalog: ArticleCatalog,
    kinds: tuple[EdgeKind, ...] = (EdgeKind.E1, EdgeKind.E2, EdgeKind.E3, EdgeKind.E4),
) -> list[tuple[EdgeKind, list[Entity]]]:
    """Symbolic metadata edges, one list of entities per edge.

    Articles with no topics, authors or tags simply produce no edge of
    the corresponding kind. Returns edges tagged by kind via
    ``zip(kinds_of_edges, edges)`` ordering: E1 block, then E2, E3, E4,
    each in ascending article/user order; see ``assemble`` for interning.
    """
    if len(interactions) == 0:
        raise GraphBuildError("interaction log is empty")
    readers, reads = _reader_map(interactions)
    edges: list[tuple[EdgeKind, list[Entity]]] = []

    if EdgeKind.E1 in kinds:
        for a, users in readers.items():
            topic_list = catalog.topics[a]
            if topic_list:
                members = [(VertexKind.ARTICLE, a)]
                members += [(VertexKind.TOPIC, t) for t in sorted(topic_list)]
                members += [(VertexKind.USER, u) for u in users]
                edges.append((EdgeKind.E1, members))
    if EdgeKind.E2 in kinds:
        for a, users in readers.items():
            author_list = catalog.authors[a]
            if author_list:
                members = [(VertexKind.ARTICLE, a)]
                members += [(VertexKind.AUTHOR, w) for w in sorted(author_list)]
                members += [(VertexKind.USER, u) for u in users]
                edges.append((EdgeKind.E2, members))
    if EdgeKind.E3 in kinds:
        for u, articles in reads.items():
            members = [(VertexKind.USER, u)]
            members += [(VertexKind.ARTICLE, a) for a in articles]
            edges.append((EdgeKind.E3, members))
    if EdgeKind.E4 in kinds:
        for a in readers:
            tag_list = catalog.iptc_tags[a]
            if tag_list:
                members = [(VertexKind.ARTICLE, a)]
                members += [(VertexKind.IPTC_TAG, t) for t in sorted(tag_list)]
                edges.append((EdgeKind.E4, members))
    return edges


def knn_neighbors(ids: np.ndarray, vectors: np.ndarray, k: int) -> dict[int, list[int]]:
    """Exact cosine k-nearest-neighbors, self excluded.

    Ties resolve to the lower id; zero vectors are reported and their
    ids skipped entirely (cosine is undefined for them).
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    norms = np.linalg.norm(vectors, axis=1)
    degenerate = norms == 0
    for bad in ids[degenerate]:
        log.warning("degenerate zero vector for entity %d; skipped from kNN", bad)
    usable = ~degenerate
    ids_u = ids[usable]
    if k >= ids_u.size:
        raise ValueError(f"k={k} must be smaller than the number of usable entities ({ids_u.size})")
    x = vectors[usable] / norms[usable][:, None]

    out: dict[int, list[int]] = {}
    chunk = max(1, 2_000_000 // max(1, ids_u.size))
    for start in range(0, ids_u.size, chunk):
        stop = min(start + chunk, ids_u.size)
        sims = x[start:stop] @ x.T
        for local, row in enumerate(range(start, stop)):
            sims[local, row] = -np.inf
        # stable argsort of the negated row: descending similarity with
        # ascending-position ties, positions map to ascending ids
        order = np.argsort(-sims, axis=1, kind="stable")[:, :k]
        for local, row in enumerate(range(start, stop)):
            out[int(ids_u[row])] = [int(ids_u[j]) for j in order[local]]
    return out


def build_knn_edges(
    vectors: dict[int, np.ndarray],
    k: int,
    kind: EdgeKind,
) -> list[tuple[EdgeKind, list[Entity]]]:
    """Symbolic similarity edges: one per usable entity, size k+1."""
    if kind not in (EdgeKind.E5, EdgeKind.E6):
        raise ValueError("kNN edges are E5 (users) or E6 (articles)")
    vertex_kind = VertexKind.USER if kind is EdgeKind.E5 else VertexKind.ARTICLE
    ids = np.array(sorted(vectors), dtype=np.int64)
    if ids.size == 0:
        return []
    matrix = np.asarray([vectors[int(i)] for i in ids], dtype=np.float64)
    neighbors = knn_neighbors(ids, matrix, k)
    edges = []
    for entity_id in sorted(neighbors):
        members = [(vertex_kind, entity_id)]
        members += [(vertex_kind, n) for n in neighbors[entity_id]]
        edges.append((kind, members))
    return edges


def assemble(
    interactions: InteractionLog,
    catalog: ArticleCatalog,
    config: GraphConfig = GraphConfig(),
) -> tuple[Hypergraph, VertexIndex]:
    """Build the full hypergraph for the selected edge kinds.

    E5 similarity uses binary per-user interaction rows over the scoped
    articles; E6 uses catalog embeddings of scoped articles. The vertex
    set is exactly the entities referenced by the built edges, so the
    orphan-vertex precondition holds by construction.
    """
    if not config.edges:
        raise EmptyConfigError("edge-kind selection is empty")
    if len(interactions) == 0:
        raise GraphBuildError("interaction log is empty")

    meta_kinds = tuple(
        kind
        for kind in (EdgeKind.E1, EdgeKind.E2, EdgeKind.E3, EdgeKind.E4)
        if kind in config.edges
    )
    symbolic = build_edges_E1_to_E4(interactions, catalog, meta_kinds) if meta_kinds else []

    readers, reads = _reader_map(interactions)
    scoped_articles = np.array(sorted(readers), dtype=np.int64)
    scoped_users = np.array(sorted(reads), dtype=np.int64)

    if EdgeKind.E5 in config.edges:
        article_pos = {int(a): i for i, a in enumerate(scoped_articles)}
        rows = {}
        for u in scoped_users:
            row = np.zeros(scoped_articles.size, dtype=np.float64)
            for a in reads[int(u)]:
                row[article_pos[a]] = 1.0
            rows[int(u)] = row
        symbolic += build_knn_edges(rows, config.knn_k_users, EdgeKind.E5)

    if EdgeKind.E6 in config.edges and catalog.embeddings is not None:
        vecs = {
            int(a): catalog.embeddings[int(a)]
            for a in scoped_articles
            if catalog.has_embedding[int(a)]
        }
        if vecs:
            symbolic += build_knn_edges(vecs, config.knn_k_articles, EdgeKind.E6)

    if not symbolic:
        raise GraphBuildError("no hyperedges could be built from the selected kinds")

    entity_set = {entity for _, members in symbolic for entity in members}
    index = VertexIndex(entity_set)
    hyperedges = [
        Hyperedge(
            id=edge_id,
            members=frozenset(index.global_index(kind, ds) for kind, ds in members),
            weight=1.0,
            kind=edge_kind,
        )
        for edge_id, (edge_kind, members) in enumerate(symbolic)
    ]
    graph = build_hypergraph(index.vertex_ids(), hyperedges)
    return graph, index
