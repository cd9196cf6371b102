"""Tests for matrix-weighted graphs, Laplacians, balance, and gauge maps."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mwconsensus.errors import (
    DimensionMismatchError,
    IndefiniteWeightError,
    SelfLoopError,
    ZeroWeightError,
)
from mwconsensus.graph import (
    Bipartition,
    MatrixWeightedGraph,
    gauge_transform,
    has_positive_negative_spanning_tree,
    is_connected,
    laplacian,
    quadratic_form,
    structural_balance,
    two_color_signs,
    validate_graph,
)
from mwconsensus.matalg import Definiteness, matrix_abs

from randgen import rand_graph, rand_pair_signs, rand_sign_definite


def toy_graph(n=3, d=2, sign=(1, 1, 1)):
    """Triangle with diagonal weights of the given signs."""
    weights = {
        (0, 1): sign[0] * np.diag([1.0, 2.0]),
        (0, 2): sign[1] * np.diag([2.0, 1.0]),
        (1, 2): sign[2] * np.diag([1.0, 1.0]),
    }
    return MatrixWeightedGraph(n, d, weights)


class TestConstruction:
    def test_validate_reports_classes(self, cluster_cfg):
        report = validate_graph(cluster_cfg.graphs["G1"])
        assert set(report) == {(0, 1), (0, 2), (1, 2)}
        assert all(cls is Definiteness.POSITIVE_DEFINITE for cls in report.values())
        report3 = validate_graph(cluster_cfg.graphs["G3"])
        assert all(cls is Definiteness.POSITIVE_SEMIDEFINITE for cls in report3.values())

    def test_variant_third_network_classes(self, bipartite_cfg):
        report = validate_graph(bipartite_cfg.graphs["G3"])
        assert report[(2, 3)] is Definiteness.NEGATIVE_DEFINITE
        assert report[(1, 4)] is Definiteness.NEGATIVE_SEMIDEFINITE
        assert report[(3, 4)] is Definiteness.POSITIVE_DEFINITE

    def test_rejects_indefinite_weight(self):
        with pytest.raises(IndefiniteWeightError) as exc:
            MatrixWeightedGraph(2, 2, {(0, 1): np.diag([1.0, -1.0])})
        assert exc.value.i == 0 and exc.value.j == 1

    def test_rejects_zero_weight(self):
        with pytest.raises(ZeroWeightError):
            MatrixWeightedGraph(2, 2, {(0, 1): np.zeros((2, 2))})

    def test_rejects_self_loop(self):
        with pytest.raises(SelfLoopError):
            MatrixWeightedGraph(2, 1, {(1, 1): np.eye(1)})

    def test_rejects_bad_shape_and_range(self):
        with pytest.raises(DimensionMismatchError):
            MatrixWeightedGraph(2, 2, {(0, 1): np.eye(3)})
        with pytest.raises(DimensionMismatchError):
            MatrixWeightedGraph(2, 2, {(0, 5): np.eye(2)})
        with pytest.raises(DimensionMismatchError):
            MatrixWeightedGraph(1, 2, {})

    def test_rejects_duplicate_edge_under_reordering(self):
        with pytest.raises(DimensionMismatchError):
            MatrixWeightedGraph(2, 1, {(0, 1): np.eye(1), (1, 0): np.eye(1)})

    def test_key_normalization_and_lookup(self):
        g = toy_graph()
        assert g.has_edge(1, 0) and g.has_edge(0, 1)
        assert np.array_equal(g.weight(1, 0), g.weight(0, 1))
        assert g.neighbors(0) == (1, 2)

    def test_empty_graph_is_valid(self):
        g = MatrixWeightedGraph(3, 2, {})
        assert g.edges == ()
        assert not is_connected(g)


class TestLaplacian:
    def test_block_structure(self, cluster_cfg):
        g = cluster_cfg.graphs["G1"]
        L = laplacian(g)
        assert L.matrix.shape == (21, 21)
        for e in g.edges:
            assert np.array_equal(L.block(e.i, e.j), -e.weight)
        # diagonal of node 0 aggregates |A_01| + |A_02|
        expected = matrix_abs(g.weight(0, 1)) + matrix_abs(g.weight(0, 2))
        assert np.allclose(L.block(0, 0), expected)
        # non-adjacent pair gives a zero block
        assert np.array_equal(L.block(0, 3), np.zeros((3, 3)))

    def test_symmetric_psd(self, rng):
        for _ in range(25):
            n = int(rng.integers(2, 6))
            d = int(rng.integers(1, 4))
            g = rand_graph(rng, n, d)
            L = laplacian(g).matrix
            assert np.abs(L - L.T).max() < 1e-12
            lam = np.linalg.eigvalsh(L)
            assert lam.min() >= -1e-9 * max(1.0, lam.max())

    def test_quadratic_form_matches_edge_sum(self, rng):
        # x^T L x must equal sum over edges of (x_i - sgn(A) x_j)^T |A| (x_i - sgn(A) x_j)
        for _ in range(15):
            n = int(rng.integers(2, 6))
            d = int(rng.integers(1, 4))
            g = rand_graph(rng, n, d)
            L = laplacian(g)
            x = rng.normal(size=n * d)
            blocks = x.reshape(n, d)
            expected = 0.0
            for e in g.edges:
                aW = matrix_abs(e.weight)
                diff = blocks[e.i] - e.sign * blocks[e.j]
                expected += float(diff @ aW @ diff)
            assert quadratic_form(L, x) == pytest.approx(expected, abs=1e-9 * max(1.0, expected))

    def test_quadratic_form_dimension_check(self):
        L = laplacian(toy_graph())
        with pytest.raises(DimensionMismatchError):
            quadratic_form(L, np.ones(5))


class TestConnectivity:
    def test_connected_and_not(self):
        path = MatrixWeightedGraph(3, 1, {(0, 1): np.eye(1), (1, 2): np.eye(1)})
        assert is_connected(path)
        split = MatrixWeightedGraph(4, 1, {(0, 1): np.eye(1), (2, 3): np.eye(1)})
        assert not is_connected(split)


class TestPNSpanningTree:
    def test_semidefinite_only_edge_fails(self):
        g = MatrixWeightedGraph(2, 2, {(0, 1): np.array([[1.0, 1.0], [1.0, 1.0]])})
        found, tree = has_positive_negative_spanning_tree(g)
        assert not found and tree is None

    def test_definite_edge_spans(self):
        g = MatrixWeightedGraph(2, 2, {(0, 1): np.diag([1.0, 2.0])})
        found, tree = has_positive_negative_spanning_tree(g)
        assert found and tree == [(0, 1)]

    def test_witness_is_a_spanning_tree_of_definite_edges(self, rng):
        for _ in range(20):
            n = int(rng.integers(3, 7))
            g = rand_graph(rng, n, 2, edge_prob=0.7)
            found, tree = has_positive_negative_spanning_tree(g)
            if not found:
                continue
            assert len(tree) == n - 1
            for key in tree:
                assert g.edge(*key).definiteness.is_definite
            # connectivity of the witness
            reach = {0}
            frontier = [0]
            adj = {k: set() for k in range(n)}
            for i, j in tree:
                adj[i].add(j)
                adj[j].add(i)
            while frontier:
                u = frontier.pop()
                for v in adj[u] - reach:
                    reach.add(v)
                    frontier.append(v)
            assert reach == set(range(n))

    def test_mixed_signs_count_equally(self):
        g = MatrixWeightedGraph(
            3, 1, {(0, 1): np.array([[2.0]]), (1, 2): np.array([[-3.0]])}
        )
        found, tree = has_positive_negative_spanning_tree(g)
        assert found and tree == [(0, 1), (1, 2)]


class TestBalance:
    def test_all_positive_graph_is_trivially_balanced(self):
        b = structural_balance(toy_graph(sign=(1, 1, 1)))
        assert b is not None and b.sigma == (1, 1, 1)

    def test_unbalanced_triangle(self):
        assert structural_balance(toy_graph(sign=(1, 1, -1))) is None

    def test_balanced_split(self):
        b = structural_balance(toy_graph(sign=(1, -1, -1)))
        assert b is not None
        assert b.positive_set == (0, 1) and b.negative_set == (2,)

    def test_coloring_deterministic_per_component(self):
        signs = {(0, 1): -1, (2, 3): -1}
        b = two_color_signs(4, signs)
        assert b.sigma == (1, -1, 1, -1)

    def test_signature_matrix_is_involutory(self):
        b = Bipartition(sigma=(1, -1, 1))
        C = b.signature_matrix(2)
        assert np.array_equal(C, C.T)
        assert np.allclose(C @ C, np.eye(6))

    def test_bad_sigma_rejected(self):
        with pytest.raises(DimensionMismatchError):
            Bipartition(sigma=(1, 0, -1))


class TestGauge:
    def test_gauge_by_balance_makes_weights_nonnegative(self, rng):
        for _ in range(15):
            n = int(rng.integers(3, 6))
            d = int(rng.integers(1, 4))
            sigma = rng.choice((-1, 1), size=n)
            weights = {}
            for i in range(n - 1):
                s = int(sigma[i] * sigma[i + 1])
                weights[(i, i + 1)] = rand_sign_definite(rng, d, s)
            g = MatrixWeightedGraph(n, d, weights)
            b = structural_balance(g)
            assert b is not None
            gauged = gauge_transform(g, b)
            assert all(e.sign == 1 for e in gauged.edges)

    @given(st.integers(0, 2**32 - 1))
    @settings(deadline=None, max_examples=40)
    def test_laplacian_conjugation_identity(self, seed):
        # L(gauged) = C L C for any bipartition, balanced or not
        rng = np.random.default_rng(seed)
        n, d = int(rng.integers(2, 5)), int(rng.integers(1, 3))
        g = rand_graph(rng, n, d)
        sigma = tuple(int(s) for s in rng.choice((-1, 1), size=n))
        b = Bipartition(sigma=sigma)
        C = b.signature_matrix(d)
        L_g = laplacian(gauge_transform(g, b)).matrix
        L_c = C @ laplacian(g).matrix @ C
        assert np.abs(L_g - L_c).max() < 1e-9 * max(1.0, np.abs(L_c).max())

    def test_dimension_check(self):
        with pytest.raises(DimensionMismatchError):
            gauge_transform(toy_graph(), Bipartition(sigma=(1, -1)))


def test_pair_signs_cover_all_pairs(rng):
    signs = rand_pair_signs(rng, 5)
    assert len(signs) == 10
