"""Laplacian-regularized ranking over a hypergraph.

Given a query vector ``y`` over all vertices, the ranking vector ``f``
minimizes a smoothness-plus-fidelity cost whose closed-form minimizer is

    f = theta/(1+theta) * (I - A/(1+theta))^{-1} y

With ``alpha = 1/(1+theta)`` this is the linear system

    (I - alpha*A) f = (1-alpha) y

solved either directly or by the fixed-point iteration

    f_{k+1} = alpha*A f_k + (1-alpha) y,   f_0 = (1-alpha) y

which is a contraction because ``alpha < 1`` and the spectral radius of
``A`` is at most one. Article entries of ``f`` are the relevance scores;
slices for other vertex kinds (authors in particular) feed the query
adaptation.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from .errors import DimensionMismatchError, NonConvergenceError
from .hypergraph import Hypergraph, VertexId, VertexKind

DEFAULT_THETA = 1.0
DEFAULT_TOL = 1e-10
DEFAULT_MAX_ITERS = 10_000

# Below this size the direct method uses a dense LAPACK solve; above it,
# sparse LU on the materialized system.
_DENSE_SOLVE_LIMIT = 1500


@dataclass
class QueryVector:
    """Sparse query over vertex global indices.

    A plain recommendation query has a single unit entry at a user
    vertex; adapted queries add nonnegative stakeholder weights.
    """

    dimension: int
    entries: dict[int, float] = field(default_factory=dict)

    def __post_init__(self):
        for idx, w in self.entries.items():
            if not (0 <= idx < self.dimension):
                raise DimensionMismatchError(self.dimension, idx)
            if not np.isfinite(w):
                raise ValueError(f"query weight for vertex {idx} is not finite")

    @classmethod
    def unit(cls, dimension: int, vertex: int) -> "QueryVector":
        return cls(dimension=dimension, entries={vertex: 1.0})

    def to_dense(self) -> np.ndarray:
        y = np.zeros(self.dimension, dtype=np.float64)
        for idx in sorted(self.entries):
            y[idx] = self.entries[idx]
        return y


@dataclass
class ScoreVector:
    """Dense ranking scores for every vertex, tagged with the
    regularization strength used to produce them."""

    scores: np.ndarray
    theta: float


def solve(
    h: Hypergraph,
    y: QueryVector | np.ndarray,
    theta: float = DEFAULT_THETA,
    method: str = "direct",
    tol: float = DEFAULT_TOL,
    max_iters: int = DEFAULT_MAX_ITERS,
) -> ScoreVector:
    """Solve the ranking system for one query.

    ``method`` is ``"direct"`` (factorized linear solve) or
    ``"iterative"`` (fixed point). Both agree to roughly ``10 * tol``.
    """
    if not theta > 0:
        raise ValueError("theta must be positive")
    dense_y = y.to_dense() if isinstance(y, QueryVector) else np.asarray(y, dtype=np.float64)
    if dense_y.shape != (h.n_vertices,):
        raise DimensionMismatchError(h.n_vertices, dense_y.shape)

    if method == "direct":
        scores = _solve_direct(h, dense_y[:, None], theta)[:, 0]
    elif method == "iterative":
        scores = solve_columns(h, dense_y[:, None], theta, tol=tol, max_iters=max_iters)[:, 0]
    else:
        raise ValueError(f"unknown solver method {method!r}")
    return ScoreVector(scores=scores, theta=theta)


def _solve_direct(h: Hypergraph, rhs: np.ndarray, theta: float) -> np.ndarray:
    alpha = 1.0 / (1.0 + theta)
    a = h.adjacency(force=True)
    if h.n_vertices <= _DENSE_SOLVE_LIMIT:
        system = np.eye(h.n_vertices) - alpha * a.toarray()
        return np.linalg.solve(system, (1.0 - alpha) * rhs)
    system = sp.eye(h.n_vertices, format="csc") - alpha * a.tocsc()
    lu = spla.splu(system)
    return lu.solve((1.0 - alpha) * rhs)


def solve_columns_direct(
    h: Hypergraph,
    rhs: np.ndarray | sp.spmatrix,
    theta: float = DEFAULT_THETA,
    block: int = 1024,
    keep_rows: np.ndarray | None = None,
) -> np.ndarray:
    """Factorize once, back-substitute for every query column.

    Materializes the adjacency, so intended for graphs below the
    implicit-operator threshold; the iterative batch solver covers the
    rest.
    """
    if not theta > 0:
        raise ValueError("theta must be positive")
    sparse_rhs = sp.issparse(rhs)
    if sparse_rhs:
        rhs = rhs.tocsc()
    if rhs.shape[0] != h.n_vertices:
        raise DimensionMismatchError(h.n_vertices, rhs.shape)
    alpha = 1.0 / (1.0 + theta)
    system = sp.eye(h.n_vertices, format="csc") - alpha * h.adjacency(force=True).tocsc()
    lu = spla.splu(system)
    n_rows = h.n_vertices if keep_rows is None else len(keep_rows)
    out = np.empty((n_rows, rhs.shape[1]), dtype=np.float64)
    for start in range(0, rhs.shape[1], block):
        chunk = rhs[:, start : start + block]
        if sparse_rhs:
            chunk = np.asarray(chunk.todense(), dtype=np.float64)
        f = lu.solve((1.0 - alpha) * np.asarray(chunk, dtype=np.float64))
        out[:, start : start + block] = f if keep_rows is None else f[keep_rows]
    return out


def solve_columns(
    h: Hypergraph,
    rhs: np.ndarray | sp.spmatrix,
    theta: float = DEFAULT_THETA,
    tol: float = DEFAULT_TOL,
    max_iters: int = DEFAULT_MAX_ITERS,
    block: int = 1024,
    keep_rows: np.ndarray | None = None,
) -> np.ndarray:
    """Fixed-point solve for a batch of query columns.

    Iterates all columns of a block together; convergence is declared
    when the max-norm of the update across the whole block is at or
    below ``tol``. Blocks bound peak memory for wide batches, and
    ``keep_rows`` returns only the requested vertex rows so wide batches
    never materialize the full score matrix.
    """
    if not theta > 0:
        raise ValueError("theta must be positive")
    sparse_rhs = sp.issparse(rhs)
    if sparse_rhs:
        rhs = rhs.tocsc()
    else:
        rhs = np.asarray(rhs, dtype=np.float64)
    if rhs.ndim != 2 or rhs.shape[0] != h.n_vertices:
        raise DimensionMismatchError(h.n_vertices, rhs.shape)

    alpha = 1.0 / (1.0 + theta)
    n_rows = h.n_vertices if keep_rows is None else len(keep_rows)
    out = np.empty((n_rows, rhs.shape[1]), dtype=np.float64)
    for start in range(0, rhs.shape[1], block):
        chunk = rhs[:, start : start + block]
        if sparse_rhs:
            chunk = np.asarray(chunk.todense(), dtype=np.float64)
        base = (1.0 - alpha) * chunk
        f = base.copy()
        converged = False
        for _ in range(max_iters):
            f_next = alpha * h.apply_adjacency(f)
            f_next += base
            delta = float(np.max(np.abs(f_next - f))) if f.size else 0.0
            f = f_next
            if delta <= tol:
                converged = True
                break
        if not converged:
            raise NonConvergenceError(max_iters, delta)
        out[:, start : start + block] = f if keep_rows is None else f[keep_rows]
    return out


def extract_scores(
    h: Hypergraph,
    f: ScoreVector,
    kind: VertexKind,
    exclude: frozenset[int] | set[int] = frozenset(),
) -> list[tuple[VertexId, float]]:
    """Ranked (vertex, score) pairs for one vertex kind.

    Descending score; ties broken by ascending vertex index so rankings
    are reproducible.
    """
    idx = h.vertices_of_kind(kind)
    if exclude:
        keep = np.array([i not in exclude for i in idx], dtype=bool)
        idx = idx[keep]
    if idx.size == 0:
        return []
    vals = f.scores[idx]
    order = np.lexsort((idx, -vals))
    return [(h.vertices[idx[i]], float(vals[i])) for i in order]


def normalize_relevance(raw: np.ndarray, norm: str = "minmax") -> np.ndarray:
    """Normalize an author score slice to commensurate weights.

    ``minmax`` maps onto [0, 1]; a constant slice maps to all ones.
    ``sum`` rescales to sum one; an all-zero slice also maps to ones.
    """
    raw = np.asarray(raw, dtype=np.float64)
    if raw.size == 0:
        return raw.copy()
    if norm == "minmax":
        lo, hi = float(raw.min()), float(raw.max())
        if hi == lo:
            return np.ones_like(raw)
        return (raw - lo) / (hi - lo)
    if norm == "sum":
        total = float(raw.sum())
        if total == 0:
            return np.ones_like(raw)
        return raw / total
    raise ValueError(f"unknown normalization {norm!r}")


def author_relevance(
    h: Hypergraph,
    user: int,
    theta: float = DEFAULT_THETA,
    method: str = "direct",
    norm: str = "minmax",
    tol: float = DEFAULT_TOL,
    max_iters: int = DEFAULT_MAX_ITERS,
) -> dict[int, float]:
    """Per-author relevance for one user.

    Solves the unit query at the user vertex, takes the author slice of
    the score vector and normalizes it (see ``normalize_relevance``).
    Keys are author vertex global indices.
    """
    if not any(v.global_index == user and v.kind is VertexKind.USER for v in h.vertices):
        raise ValueError(f"vertex {user} is not a user vertex")
    f = solve(h, QueryVector.unit(h.n_vertices, user), theta, method, tol, max_iters)
    authors = h.vertices_of_kind(VertexKind.AUTHOR)
    weights = normalize_relevance(f.scores[authors], norm=norm)
    return {int(a): float(w) for a, w in zip(authors, weights)}


__all__ = [
    "QueryVector",
    "ScoreVector",
    "solve",
    "solve_columns",
    "solve_columns_direct",
    "extract_scores",
    "author_relevance",
    "normalize_relevance",
    "DEFAULT_THETA",
    "DEFAULT_TOL",
    "DEFAULT_MAX_ITERS",
]
