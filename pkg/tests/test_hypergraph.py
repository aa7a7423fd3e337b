import numpy as np
import pytest

from hgrec.errors import (
    DimensionMismatchError,
    EmptyHyperedgeError,
    GraphBuildError,
    OrphanVertexError,
    UnknownVertexError,
)
from hgrec.hypergraph import VertexKind, build_hypergraph

from conftest import (
    dense_adjacency,
    make_edge,
    make_vertices,
    random_hypergraph,
    two_vertex_graph,
)


class TestBuild:
    def test_two_vertices_one_edge_degrees(self):
        h = two_vertex_graph()
        assert h.vertex_degrees.tolist() == [1.0, 1.0]
        assert h.hyperedge_degrees.tolist() == [2.0]

    def test_vertex_in_three_unit_edges(self):
        vertices = make_vertices(2)
        edges = [make_edge(j, [0, 1]) for j in range(3)]
        h = build_hypergraph(vertices, edges)
        assert h.vertex_degrees[0] == 3.0

    def test_degrees_recomputable_from_incidence(self):
        # with unit weights the degree sums are integer-valued and exact
        rng = np.random.default_rng(3)
        for _ in range(20):
            h = random_hypergraph(rng)
            H = h.incidence.toarray()
            w = np.array([e.weight for e in h.hyperedges])
            np.testing.assert_array_equal(h.vertex_degrees, H @ w)
            np.testing.assert_array_equal(h.hyperedge_degrees, H.sum(axis=0))

    def test_degrees_recomputable_weighted(self):
        rng = np.random.default_rng(5)
        for _ in range(20):
            h = random_hypergraph(rng, unit_weights=False)
            H = h.incidence.toarray()
            w = np.array([e.weight for e in h.hyperedges])
            np.testing.assert_allclose(h.vertex_degrees, H @ w, rtol=1e-14)
            np.testing.assert_array_equal(h.hyperedge_degrees, H.sum(axis=0))

    def test_incidence_binary_matches_membership(self):
        h = random_hypergraph(np.random.default_rng(4))
        H = h.incidence.toarray()
        for j, edge in enumerate(h.hyperedges):
            for v in range(h.n_vertices):
                assert H[v, j] == (1.0 if v in edge.members else 0.0)

    def test_orphan_vertex_rejected(self):
        vertices = make_vertices(3)
        with pytest.raises(OrphanVertexError):
            build_hypergraph(vertices, [make_edge(0, [0, 1])])

    def test_unknown_vertex_rejected(self):
        with pytest.raises(UnknownVertexError):
            build_hypergraph(make_vertices(2), [make_edge(0, [0, 5])])

    def test_empty_hyperedge_rejected(self):
        with pytest.raises(EmptyHyperedgeError):
            make_edge(0, [])

    def test_global_indices_must_be_dense(self):
        vertices = make_vertices(2)
        broken = [vertices[0], type(vertices[1])(VertexKind.USER, 1, 7)]
        with pytest.raises(GraphBuildError):
            build_hypergraph(broken, [make_edge(0, [0, 1])])


class TestAdjacency:
    def test_two_vertex_hand_case(self):
        a = two_vertex_graph().adjacency().toarray()
        np.testing.assert_allclose(a, [[0.5, 0.5], [0.5, 0.5]], atol=1e-15)

    def test_singleton_edge_identity_normalization(self):
        h = build_hypergraph(make_vertices(1), [make_edge(0, [0])])
        assert h.adjacency().toarray()[0, 0] == pytest.approx(1.0, abs=1e-15)

    def test_three_vertex_two_edge_dense_oracle(self):
        vertices = make_vertices(3)
        edges = [make_edge(0, [0, 1]), make_edge(1, [1, 2])]
        h = build_hypergraph(vertices, edges)
        np.testing.assert_allclose(h.adjacency().toarray(), dense_adjacency(h), atol=1e-15)

    def test_sparse_matches_dense_on_random_instances(self):
        rng = np.random.default_rng(7)
        for _ in range(50):
            h = random_hypergraph(rng, unit_weights=False)
            a = h.adjacency().toarray()
            np.testing.assert_allclose(a, dense_adjacency(h), atol=1e-12)

    def test_symmetry_exact(self):
        rng = np.random.default_rng(11)
        for _ in range(20):
            a = random_hypergraph(rng).adjacency()
            assert (a != a.T).nnz == 0

    def test_entries_nonnegative_and_sharing_structure(self):
        rng = np.random.default_rng(13)
        h = random_hypergraph(rng, max_vertices=20, max_edges=10)
        a = h.adjacency().toarray()
        assert (a >= 0).all()
        share = np.zeros_like(a, dtype=bool)
        for edge in h.hyperedges:
            members = sorted(edge.members)
            for i in members:
                for j in members:
                    share[i, j] = True
        np.testing.assert_array_equal(a > 0, share)

    def test_spectrum_within_unit_interval(self):
        rng = np.random.default_rng(17)
        for _ in range(25):
            h = random_hypergraph(rng, max_vertices=40, unit_weights=False)
            eigs = np.linalg.eigvalsh(h.adjacency().toarray())
            assert eigs.min() >= -1.0 - 1e-9
            assert eigs.max() <= 1.0 + 1e-9

    def test_implicit_apply_matches_dense_product(self):
        rng = np.random.default_rng(19)
        for _ in range(20):
            h = random_hypergraph(rng, max_vertices=100, unit_weights=False)
            x = rng.standard_normal(h.n_vertices)
            np.testing.assert_allclose(
                h.apply_adjacency(x), dense_adjacency(h) @ x, atol=1e-12
            )

    def test_implicit_apply_matrix_argument(self):
        rng = np.random.default_rng(23)
        h = random_hypergraph(rng, max_vertices=30)
        x = rng.standard_normal((h.n_vertices, 5))
        np.testing.assert_allclose(
            h.apply_adjacency(x), dense_adjacency(h) @ x, atol=1e-12
        )


class TestLaplacianQuadratic:
    def test_zero_vector(self):
        assert two_vertex_graph().laplacian_quadratic(np.zeros(2)) == 0.0

    def test_constant_vector_in_null_space(self):
        h = two_vertex_graph()
        # rows of A sum to one here, so constants produce zero energy
        assert h.laplacian_quadratic(np.full(2, 3.7)) == pytest.approx(0.0, abs=1e-12)

    def test_matches_dense_oracle(self):
        rng = np.random.default_rng(29)
        h = random_hypergraph(rng, max_vertices=10)
        f = rng.standard_normal(h.n_vertices)
        dense_l = np.eye(h.n_vertices) - dense_adjacency(h)
        assert h.laplacian_quadratic(f) == pytest.approx(f @ dense_l @ f, abs=1e-10)

    def test_positive_semidefinite(self):
        rng = np.random.default_rng(31)
        for _ in range(100):
            h = random_hypergraph(rng, max_vertices=50)
            f = rng.standard_normal(h.n_vertices) * rng.uniform(0.1, 10)
            assert h.laplacian_quadratic(f) >= -1e-9

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionMismatchError):
            two_vertex_graph().laplacian_quadratic(np.zeros(3))


class TestImmutability:
    def test_adjacency_cached(self):
        h = two_vertex_graph()
        assert h.adjacency() is h.adjacency()

    def test_large_graph_refuses_materialization(self):
        from hgrec import hypergraph as hg

        rng = np.random.default_rng(37)
        h = random_hypergraph(rng, max_vertices=30)
        old = hg.IMPLICIT_ADJACENCY_THRESHOLD
        hg.IMPLICIT_ADJACENCY_THRESHOLD = 1
        try:
            with pytest.raises(GraphBuildError):
                h.adjacency()
            assert h.adjacency(force=True) is not None
        finally:
            hg.IMPLICIT_ADJACENCY_THRESHOLD = old
