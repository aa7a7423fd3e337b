"""Typed hypergraph with sparse incidence structure and the normalized
adjacency operator used for ranking.

A hypergraph is a set of typed vertices (users, articles, authors,
topics, standardized press tags) connected by hyperedges, each of which
may contain any number of vertices. The incidence matrix ``H`` is binary
of shape ``|V| x |E|``; vertex and hyperedge degrees are

    deg(v) = sum_e w(e) * H[v, e]
    deg(e) = sum_v H[v, e]

and the normalized adjacency is

    A = Dv^{-1/2} H W De^{-1} H^T Dv^{-1/2}

where ``Dv``, ``De`` and ``W`` are the diagonal matrices of vertex
degrees, hyperedge degrees and hyperedge weights. The inverse-degree
scalings down-weight objects that appear in many hyperedges, which
dampens the influence of very popular vertices. ``A`` is symmetric,
positive semidefinite and has spectral radius at most 1, so ``I - A``
is a positive semidefinite Laplacian.

Above ``IMPLICIT_ADJACENCY_THRESHOLD`` vertices the adjacency is applied
as factored sparse products and never materialized: hyperedges that
contain many vertices make the explicit ``A`` quadratically dense.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Sequence

import numpy as np
import scipy.sparse as sp

from .errors import (
    DimensionMismatchError,
    EmptyHyperedgeError,
    GraphBuildError,
    OrphanVertexError,
    UnknownVertexError,
)

# Materializing A is fine for small graphs; beyond this many vertices the
# factored operator is used instead.
IMPLICIT_ADJACENCY_THRESHOLD = 5000


class VertexKind(Enum):
    USER = "user"
    ARTICLE = "article"
    AUTHOR = "author"
    TOPIC = "topic"
    IPTC_TAG = "iptc_tag"


# Deterministic global ordering of vertex kinds.
KIND_ORDER = {
    VertexKind.USER: 0,
    VertexKind.ARTICLE: 1,
    VertexKind.AUTHOR: 2,
    VertexKind.TOPIC: 3,
    VertexKind.IPTC_TAG: 4,
}


class EdgeKind(Enum):
    E1 = "E1"  # article + its topics + its readers
    E2 = "E2"  # article + its authors + its readers
    E3 = "E3"  # user + the articles the user read
    E4 = "E4"  # article + its standardized press tags
    E5 = "E5"  # user + k most similar users
    E6 = "E6"  # article + k most similar articles


@dataclass(frozen=True)
class VertexId:
    """A typed vertex. ``index`` is local to the kind, ``global_index``
    is unique across the whole hypergraph."""

    kind: VertexKind
    index: int
    global_index: int


@dataclass(frozen=True)
class Hyperedge:
    """A weighted hyperedge over vertex global indices.

    Weights are positive and default to 1.0; the ranking model keeps all
    hyperedge weights equal (weight learning is out of scope).
    """

    id: int
    members: frozenset[int]
    weight: float = 1.0
    kind: EdgeKind = EdgeKind.E3

    def __post_init__(self):
        if len(self.members) == 0:
            raise EmptyHyperedgeError(self.id)
        if not self.weight > 0:
            raise GraphBuildError(f"hyperedge {self.id}: weight must be > 0")


@dataclass
class Hypergraph:
    """Immutable-after-build hypergraph with cached incidence and degrees.

    Many query workers may read a built instance concurrently; nothing
    here mutates after :func:`build_hypergraph` returns.
    """

    vertices: list[VertexId]
    hyperedges: list[Hyperedge]
    incidence: sp.csr_matrix
    vertex_degrees: np.ndarray
    hyperedge_degrees: np.ndarray
    # factored operator pieces, set at build time
    _incidence_t: sp.csr_matrix = field(repr=False, default=None)
    _inv_sqrt_deg_v: np.ndarray = field(repr=False, default=None)
    _edge_scale: np.ndarray = field(repr=False, default=None)
    _adjacency_cache: sp.csr_matrix = field(repr=False, default=None)

    @property
    def n_vertices(self) -> int:
        return len(self.vertices)

    @property
    def n_edges(self) -> int:
        return len(self.hyperedges)

    def vertices_of_kind(self, kind: VertexKind) -> np.ndarray:
        """Global indices of all vertices of one kind, ascending."""
        return np.array(
            [v.global_index for v in self.vertices if v.kind is kind], dtype=np.int64
        )

    def apply_adjacency(self, x: np.ndarray) -> np.ndarray:
        """Compute ``A @ x`` through the factored form, for a vector or a
        matrix of column vectors. Never materializes ``A``."""
        scaled = self._inv_sqrt_deg_v[:, None] * x if x.ndim == 2 else self._inv_sqrt_deg_v * x
        edge_vals = self._incidence_t @ scaled
        if x.ndim == 2:
            edge_vals *= self._edge_scale[:, None]
        else:
            edge_vals *= self._edge_scale
        back = self.incidence @ edge_vals
        if x.ndim == 2:
            back *= self._inv_sqrt_deg_v[:, None]
        else:
            back *= self._inv_sqrt_deg_v
        return back

    def adjacency(self, force: bool = False) -> sp.csr_matrix:
        """Materialized sparse adjacency ``A``.

        Refused above ``IMPLICIT_ADJACENCY_THRESHOLD`` vertices unless
        ``force`` is given, because large hyperedges make A dense-ish.
        The product is symmetrized to make symmetry exact rather than
        within floating-point roundoff.
        """
        if self._adjacency_cache is not None:
            return self._adjacency_cache
        if self.n_vertices > IMPLICIT_ADJACENCY_THRESHOLD and not force:
            raise GraphBuildError(
                f"refusing to materialize adjacency for {self.n_vertices} vertices; "
                f"use apply_adjacency or pass force=True"
            )
        b = self._scaled_incidence_factor()
        a = b @ b.T
        a = (a + a.T) * 0.5
        a = sp.csr_matrix(a)
        self._adjacency_cache = a
        return a

    def _scaled_incidence_factor(self) -> sp.csr_matrix:
        """B = Dv^{-1/2} H (W De^{-1})^{1/2}, so that A = B B^T."""
        dv = sp.diags(self._inv_sqrt_deg_v)
        de = sp.diags(np.sqrt(self._edge_scale))
        return sp.csr_matrix(dv @ self.incidence @ de)

    def laplacian_quadratic(self, f: np.ndarray) -> float:
        """Smoothness penalty ``f^T (I - A) f``.

        Zero exactly when f is constant on a graph whose adjacency rows
        sum to one; nonnegative up to roundoff in general.
        """
        f = np.asarray(f, dtype=np.float64)
        if f.shape != (self.n_vertices,):
            raise DimensionMismatchError(self.n_vertices, f.shape)
        # f^T A f == ||B^T f||^2 through the factored form
        scaled = self._inv_sqrt_deg_v * f
        edge_vals = self._incidence_t @ scaled
        quad_a = float(np.dot(edge_vals * self._edge_scale, edge_vals))
        return float(np.dot(f, f)) - quad_a


def build_hypergraph(
    vertices: Sequence[VertexId], hyperedges: Iterable[Hyperedge]
) -> Hypergraph:
    """Validate and assemble a hypergraph.

    Raises ``UnknownVertexError`` if an edge references an undeclared
    vertex, ``OrphanVertexError`` if a declared vertex is in no edge
    (its normalization would be undefined), and ``GraphBuildError`` on
    malformed vertex numbering.
    """
    vertices = list(vertices)
    hyperedges = list(hyperedges)
    n = len(vertices)
    if n == 0:
        raise GraphBuildError("hypergraph needs at least one vertex")

    globals_seen = sorted(v.global_index for v in vertices)
    if globals_seen != list(range(n)):
        raise GraphBuildError("vertex global indices must cover 0..|V|-1 exactly")
    kinds_seen = {(v.kind, v.index) for v in vertices}
    if len(kinds_seen) != n:
        raise GraphBuildError("(kind, index) pairs must be unique")

    vertices = sorted(vertices, key=lambda v: v.global_index)

    rows, cols = [], []
    weights = np.empty(len(hyperedges), dtype=np.float64)
    for j, edge in enumerate(hyperedges):
        if len(edge.members) == 0:
            raise EmptyHyperedgeError(edge.id)
        weights[j] = edge.weight
        for v in sorted(edge.members):
            if not (0 <= v < n):
                raise UnknownVertexError(v, edge.id)
            rows.append(v)
            cols.append(j)

    h = sp.csr_matrix(
        (np.ones(len(rows), dtype=np.float64), (rows, cols)),
        shape=(n, len(hyperedges)),
    )
    deg_e = np.asarray(h.sum(axis=0)).ravel()
    deg_v = np.asarray(h @ weights).ravel()

    if np.any(deg_v == 0):
        orphan = int(np.argmax(deg_v == 0))
        raise OrphanVertexError(vertices[orphan])

    graph = Hypergraph(
        vertices=vertices,
        hyperedges=hyperedges,
        incidence=h,
        vertex_degrees=deg_v,
        hyperedge_degrees=deg_e,
    )
    graph._incidence_t = sp.csr_matrix(h.T)
    graph._inv_sqrt_deg_v = 1.0 / np.sqrt(deg_v)
    graph._edge_scale = weights / deg_e
    return graph


def adjacency(h: Hypergraph) -> sp.csr_matrix:
    """Functional alias for :meth:`Hypergraph.adjacency`."""
    return h.adjacency()


def laplacian_quadratic(h: Hypergraph, f: np.ndarray) -> float:
    """Functional alias for :meth:`Hypergraph.laplacian_quadratic`."""
    return h.laplacian_quadratic(f)
