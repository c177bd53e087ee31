import numpy as np
import pytest

from predkmeans.datasets import (
    Graph,
    load_cifar10,
    load_csv,
    load_edge_list,
    normalized_laplacian,
    save_edge_list,
    spectral_embed,
    synth_gmm,
)
from predkmeans.errors import ConfigError, DomainError, FormatError
from predkmeans.kmeans import LloydConfig, best_of_kmeans

from oracles import canonical_relabel


class TestLoadCsv:
    def test_direct_parse(self, tmp_path):
        path = tmp_path / "m.csv"
        path.write_text("1,2\n3,4\n")
        assert load_csv(path).tolist() == [[1.0, 2.0], [3.0, 4.0]]

    def test_header_skipped(self, tmp_path):
        path = tmp_path / "m.csv"
        path.write_text("a,b\n1,2\n")
        assert load_csv(path, has_header=True).tolist() == [[1.0, 2.0]]

    def test_ragged_row_names_line(self, tmp_path):
        path = tmp_path / "m.csv"
        path.write_text("1,2\n3\n")
        with pytest.raises(FormatError, match="line 2"):
            load_csv(path)

    def test_crlf_accepted(self, tmp_path):
        path = tmp_path / "m.csv"
        path.write_bytes(b"1,2\r\n3,4\r\n")
        assert load_csv(path).tolist() == [[1.0, 2.0], [3.0, 4.0]]

    def test_non_finite_rejected(self, tmp_path):
        path = tmp_path / "m.csv"
        path.write_text("1,nan\n")
        with pytest.raises(FormatError, match="line 1"):
            load_csv(path)

    def test_empty_rejected(self, tmp_path):
        path = tmp_path / "m.csv"
        path.write_text("")
        with pytest.raises(FormatError):
            load_csv(path)


class TestLoadCifar10:
    @staticmethod
    def two_record_fixture(tmp_path):
        # Record 0: label 3, all pixel bytes 0; record 1: label 7, all 255.
        rec0 = bytes([3] + [0] * 3072)
        rec1 = bytes([7] + [255] * 3072)
        path = tmp_path / "batch.bin"
        path.write_bytes(rec0 + rec1)
        return path

    def test_fixture_bit_exact(self, tmp_path):
        data = load_cifar10(self.two_record_fixture(tmp_path))
        assert data.labels.tolist() == [3, 7]
        assert data.points.shape == (2, 3072)
        assert data.points[0].min() == 0.0 and data.points[0].max() == 0.0
        assert data.points[1].min() == 1.0 and data.points[1].max() == 1.0

    def test_raw_mode_keeps_bytes(self, tmp_path):
        data = load_cifar10(self.two_record_fixture(tmp_path), scale=False)
        assert data.points[1].max() == 255.0

    def test_empty_file(self, tmp_path):
        path = tmp_path / "empty.bin"
        path.write_bytes(b"")
        data = load_cifar10(path)
        assert data.points.shape == (0, 3072)
        assert data.labels.shape == (0,)

    def test_truncated_file_rejected(self, tmp_path):
        path = tmp_path / "bad.bin"
        path.write_bytes(bytes(3072))
        with pytest.raises(FormatError, match="3072"):
            load_cifar10(path)

    def test_label_out_of_range_names_record(self, tmp_path):
        rec0 = bytes([1] + [0] * 3072)
        rec1 = bytes([11] + [0] * 3072)
        path = tmp_path / "bad.bin"
        path.write_bytes(rec0 + rec1)
        with pytest.raises(FormatError, match="record 1"):
            load_cifar10(path)


class TestLoadEdgeList:
    def test_direct_parse(self, tmp_path):
        path = tmp_path / "g.txt"
        path.write_text("0 1\n1 2\n")
        g = load_edge_list(path)
        assert g.node_count == 3
        assert g.edges == ((0, 1), (1, 2))

    def test_self_loop_and_duplicate_dropped(self, tmp_path):
        path = tmp_path / "g.txt"
        path.write_text("5 5\n0 1\n0 1\n")
        g = load_edge_list(path)
        # Node 5 appears first, so compaction maps 5->0, 0->1, 1->2.
        assert g.node_count == 3
        assert g.edges == ((1, 2),)

    def test_non_integer_names_line(self, tmp_path):
        path = tmp_path / "g.txt"
        path.write_text("a b\n")
        with pytest.raises(FormatError, match="line 1"):
            load_edge_list(path)

    def test_comments_and_blanks_skipped(self, tmp_path):
        path = tmp_path / "g.txt"
        path.write_text("# header\n\n0 1\n")
        g = load_edge_list(path)
        assert g.node_count == 2 and g.edges == ((0, 1),)

    def test_round_trip_exact(self, tmp_path):
        path = tmp_path / "g.txt"
        path.write_text("4 0\n0 1\n1 2\n2 4\n3 3\n")
        g = load_edge_list(path)
        out = tmp_path / "g2.txt"
        save_edge_list(g, out)
        again = load_edge_list(out)
        assert again.node_count == g.node_count
        assert again.edges == g.edges


def triangle_pair():
    edges = ((0, 1), (0, 2), (1, 2), (3, 4), (3, 5), (4, 5))
    return Graph(node_count=6, edges=edges)


def complete_graph(n):
    edges = tuple((i, j) for i in range(n) for j in range(i + 1, n))
    return Graph(node_count=n, edges=edges)


class TestSpectralEmbed:
    def test_disjoint_triangles_separate(self):
        emb = spectral_embed(triangle_pair(), dim=1)
        first = emb[:3, 0]
        second = emb[3:, 0]
        # Constant within each component, distinct between them.
        assert np.max(np.abs(first - first.mean())) <= 1e-7
        assert np.max(np.abs(second - second.mean())) <= 1e-7
        assert abs(first.mean() - second.mean()) > 0.1

    def test_k4_eigenvalue_closed_form(self):
        g = complete_graph(4)
        emb = spectral_embed(g, dim=1)
        L = normalized_laplacian(g)
        v = emb[:, 0]
        lam = float(v @ (L @ v))
        assert abs(lam - 4.0 / 3.0) <= 1e-8

    def test_path_graph_symmetry(self):
        g = Graph(node_count=3, edges=((0, 1), (1, 2)))
        emb = spectral_embed(g, dim=1)
        assert abs(abs(emb[0, 0]) - abs(emb[2, 0])) <= 1e-8

    def test_columns_orthonormal(self):
        g = complete_graph(7)
        emb = spectral_embed(g, dim=3)
        G = emb.T @ emb
        assert np.max(np.abs(G - np.eye(3))) <= 1e-7

    def test_too_small_graph_rejected(self):
        with pytest.raises(DomainError):
            spectral_embed(Graph(node_count=2, edges=((0, 1),)), dim=2)

    def test_laplacian_matches_hand_values(self):
        g = Graph(node_count=3, edges=((0, 1), (1, 2)))
        L = normalized_laplacian(g)
        s = 1.0 / np.sqrt(2.0)
        expected = np.array([
            [1.0, -s, 0.0],
            [-s, 1.0, -s],
            [0.0, -s, 1.0],
        ])
        assert np.max(np.abs(L - expected)) <= 1e-12


class TestSynthGmm:
    def test_tiny_sigma_sticks_to_means(self):
        data = synth_gmm(k=3, n_per=10, dim=4, separation=10.0, sigma=1e-9, seed=0)
        for j in range(3):
            block = data.points[data.labels == j]
            spread = np.abs(block - block.mean(axis=0)).max()
            assert spread <= 1e-6

    def test_single_class(self):
        data = synth_gmm(k=1, n_per=5, dim=3, separation=5.0, sigma=1.0, seed=1)
        assert data.labels.tolist() == [0] * 5

    def test_bit_identical_per_seed(self):
        a = synth_gmm(k=4, n_per=20, dim=6, separation=12.0, sigma=1.0, seed=9)
        b = synth_gmm(k=4, n_per=20, dim=6, separation=12.0, sigma=1.0, seed=9)
        assert np.array_equal(a.points, b.points)
        assert np.array_equal(a.labels, b.labels)

    def test_mean_placement_respects_separation(self):
        data = synth_gmm(k=5, n_per=2, dim=8, separation=16.0, sigma=1e-9, seed=3)
        means = np.array([
            data.points[data.labels == j].mean(axis=0) for j in range(5)
        ])
        assert np.allclose(np.linalg.norm(means, axis=1), 16.0, atol=1e-5)
        for i in range(5):
            for j in range(i + 1, 5):
                assert np.linalg.norm(means[i] - means[j]) >= 8.0 - 1e-5

    def test_infeasible_separation_raises_config_error(self):
        with pytest.raises(ConfigError):
            synth_gmm(k=20, n_per=1, dim=1, separation=10.0, sigma=1.0, seed=0)

    def test_high_separation_recovery_rate(self):
        # Well-separated blobs: seeded k-means++ recovers the true partition
        # in at least 95 of 100 seeds.
        recovered = 0
        for seed in range(100):
            data = synth_gmm(k=4, n_per=25, dim=10, separation=20.0, sigma=1.0,
                             seed=seed)
            result = best_of_kmeans(data.points, 4, 3, LloydConfig(seed=seed))
            if canonical_relabel(result.labels) == canonical_relabel(data.labels):
                recovered += 1
        assert recovered >= 95
