"""Tests for graph generators, shortest paths, and walk similarities."""

import itertools

import numpy as np
import pytest
from numpy.testing import assert_allclose
from scipy.sparse.csgraph import floyd_warshall

from hilbertsimplex.graphs import (
    Graph,
    _erdos_renyi_sample,
    GraphConnectivityError,
    load_graph,
    load_matrix,
    make_barabasi_albert,
    make_erdos_renyi,
    random_points_distance_matrix,
    random_walk_similarity,
    save_graph,
    save_matrix,
    shortest_path_matrix,
)


def complete_graph(n):
    return Graph(n, tuple((i, j) for i in range(n) for j in range(i + 1, n)))


def path_graph(n):
    return Graph(n, tuple((i, i + 1) for i in range(n - 1)))


class TestGraphType:
    def test_self_loop_rejected(self):
        with pytest.raises(ValueError):
            Graph(3, ((0, 0),))

    def test_duplicate_edge_rejected(self):
        with pytest.raises(ValueError):
            Graph(3, ((0, 1), (0, 1)))

    def test_out_of_range_rejected(self):
        with pytest.raises(ValueError):
            Graph(3, ((0, 3),))

    def test_edges_sorted(self):
        g = Graph(4, ((2, 3), (0, 1)))
        assert g.edges == ((0, 1), (2, 3))

    def test_degrees_and_adjacency(self):
        g = path_graph(4)
        assert list(g.degrees()) == [1, 2, 2, 1]
        A = g.adjacency_matrix()
        assert A[0, 1] == 1 and A[1, 0] == 1 and A[0, 2] == 0


class TestErdosRenyi:
    def test_p_one_gives_complete_graph(self):
        g = make_erdos_renyi(5, 1.0, seed=0)
        assert g.num_edges == 10

    def test_deterministic(self):
        a = make_erdos_renyi(50, 0.5, seed=123)
        b = make_erdos_renyi(50, 0.5, seed=123)
        assert a.edges == b.edges

    def test_different_seeds_differ(self):
        a = make_erdos_renyi(50, 0.5, seed=1)
        b = make_erdos_renyi(50, 0.5, seed=2)
        assert a.edges != b.edges

    def test_always_connected(self):
        for seed in range(20):
            assert make_erdos_renyi(20, 0.2, seed=seed).is_connected()

    def test_mean_edge_count_matches_binomial(self):
        # n=20, p=0.2: 190 pairs, expected 38 edges; compare the mean of
        # 1000 raw samples against the binomial within three standard
        # errors.  The raw sampler is used because conditioning on
        # connectivity biases sparse samples upward.
        counts = [_erdos_renyi_sample(20, 0.2, seed=s, attempt=0).num_edges for s in range(1000)]
        se = np.sqrt(190 * 0.2 * 0.8 / 1000)
        assert abs(np.mean(counts) - 38.0) <= 3 * se

    def test_filtered_mean_edge_count_close(self):
        # the connectivity filter may shift the mean slightly, not grossly
        counts = [make_erdos_renyi(20, 0.2, seed=s).num_edges for s in range(300)]
        assert abs(np.mean(counts) - 38.0) <= 3.0

    def test_parameter_validation(self):
        with pytest.raises(ValueError):
            make_erdos_renyi(1, 0.5, seed=0)
        with pytest.raises(ValueError):
            make_erdos_renyi(5, 0.0, seed=0)
        with pytest.raises(ValueError):
            make_erdos_renyi(5, 1.5, seed=0)
        with pytest.raises(ValueError):
            make_erdos_renyi(5, 0.5, seed=-1)


class TestBarabasiAlbert:
    def test_seed_clique_only(self):
        g = make_barabasi_albert(3, 2, seed=0)
        assert g.edges == ((0, 1), (0, 2), (1, 2))

    def test_edge_count_formula(self):
        # clique of m+1=3 nodes (3 edges) plus 97 attaching nodes with 2 each
        g = make_barabasi_albert(100, 2, seed=0)
        assert g.num_edges == 3 + 97 * 2 == 197

    @pytest.mark.parametrize("n,m", [(10, 1), (25, 3), (60, 5), (7, 6)])
    def test_edge_count_formula_grid(self, n, m):
        g = make_barabasi_albert(n, m, seed=4)
        assert g.num_edges == m * (m + 1) // 2 + (n - m - 1) * m

    def test_connected_by_construction(self):
        for seed in range(10):
            assert make_barabasi_albert(40, 2, seed=seed).is_connected()

    def test_deterministic(self):
        assert make_barabasi_albert(30, 2, seed=9).edges == make_barabasi_albert(30, 2, seed=9).edges

    def test_heavy_tail(self):
        # hubs emerge: some seed reaches max degree > 4m
        m = 2
        max_deg = max(
            make_barabasi_albert(100, m, seed=s).degrees().max() for s in range(100)
        )
        assert max_deg > 4 * m

    def test_parameter_validation(self):
        with pytest.raises(ValueError):
            make_barabasi_albert(3, 3, seed=0)
        with pytest.raises(ValueError):
            make_barabasi_albert(5, 0, seed=0)


class TestShortestPaths:
    def test_complete_graph(self):
        D = shortest_path_matrix(complete_graph(5))
        assert_allclose(D, 1.0 - np.eye(5))

    def test_path_graph(self):
        D = shortest_path_matrix(path_graph(4))
        assert D[0, 3] == 3.0
        assert D[1, 3] == 2.0

    def test_disconnected_rejected(self):
        g = Graph(4, ((0, 1), (2, 3)))
        with pytest.raises(GraphConnectivityError):
            shortest_path_matrix(g)

    def test_matches_floyd_warshall(self):
        rng = np.random.default_rng(31)
        done = 0
        seed = 0
        while done < 50:
            n = int(rng.integers(4, 31))
            g = make_erdos_renyi(n, 0.3, seed=seed)
            seed += 1
            D = shortest_path_matrix(g)
            reference = floyd_warshall(g.adjacency_matrix(), directed=False)
            assert np.array_equal(D, reference)
            done += 1

    def test_triangle_inequality_exact(self):
        g = make_erdos_renyi(15, 0.3, seed=3)
        D = shortest_path_matrix(g)
        n = g.n
        for i, j, k in itertools.product(range(n), repeat=3):
            assert D[i, j] <= D[i, k] + D[k, j]


class TestRandomWalkSimilarity:
    def test_triangle_one_step(self):
        P = random_walk_similarity(complete_graph(3), steps=1)
        assert_allclose(P, np.array([[0, 0.5, 0.5], [0.5, 0, 0.5], [0.5, 0.5, 0]]))

    def test_rows_sum_to_one_diagonal_zero(self):
        g = make_barabasi_albert(30, 2, seed=5)
        P = random_walk_similarity(g, steps=5)
        assert np.all(np.diag(P) == 0.0)
        assert np.max(np.abs(P.sum(axis=1) - 1.0)) <= 1e-12
        assert np.all(P >= 0.0)

    def test_k4_five_steps_matches_walk_enumeration(self):
        # brute force: every length-5 walk in K4 has probability (1/3)^5
        g = complete_graph(4)
        counts = np.zeros((4, 4))
        for start in range(4):
            for walk in itertools.product(range(4), repeat=5):
                prev = start
                ok = True
                for node in walk:
                    if node == prev:  # K4 edges connect distinct nodes only
                        ok = False
                        break
                    prev = node
                if ok:
                    counts[start, walk[-1]] += 1
        brute = counts / 3**5
        np.fill_diagonal(brute, 0.0)
        brute /= brute.sum(axis=1, keepdims=True)
        P = random_walk_similarity(g, steps=5)
        assert np.max(np.abs(P - brute)) <= 1e-12

    def test_steps_validation(self):
        with pytest.raises(ValueError):
            random_walk_similarity(complete_graph(3), steps=0)

    def test_no_off_diagonal_mass_rejected(self):
        # K2 with an even step count concentrates all mass on the diagonal
        with pytest.raises(GraphConnectivityError):
            random_walk_similarity(complete_graph(2), steps=2)


class TestRandomPoints:
    def test_shape_symmetry_diagonal(self):
        D = random_points_distance_matrix(10, seed=0)
        assert D.shape == (10, 10)
        assert np.array_equal(D, D.T)
        assert np.all(np.diag(D) == 0.0)

    def test_deterministic(self):
        assert np.array_equal(
            random_points_distance_matrix(12, seed=5),
            random_points_distance_matrix(12, seed=5),
        )

    def test_mean_distance_scale(self):
        # differences are N(0, 2 I_n); mean pairwise norm ~ sqrt(2 n)
        n = 80
        D = random_points_distance_matrix(n, seed=1)
        off = D[~np.eye(n, dtype=bool)]
        assert abs(off.mean() - np.sqrt(2 * n)) <= 0.05 * np.sqrt(2 * n)


class TestSerialization:
    def test_graph_round_trip(self, tmp_path):
        g = make_erdos_renyi(12, 0.4, seed=7)
        path = tmp_path / "g.txt"
        save_graph(g, path)
        assert load_graph(path) == g

    def test_graph_file_format(self, tmp_path):
        g = Graph(3, ((0, 1), (1, 2)))
        path = tmp_path / "g.txt"
        save_graph(g, path)
        assert path.read_text() == "3\n0 1\n1 2\n"

    def test_matrix_round_trip(self, tmp_path):
        M = random_points_distance_matrix(9, seed=2)
        path = tmp_path / "m.csv"
        save_matrix(M, path)
        assert np.array_equal(load_matrix(path), M)

    def test_empty_graph_file_rejected(self, tmp_path):
        path = tmp_path / "empty.txt"
        path.write_text("")
        with pytest.raises(ValueError):
            load_graph(path)
