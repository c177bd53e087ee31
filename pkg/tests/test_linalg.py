import numpy as np
import pytest

from predkmeans.errors import DomainError, NumericalError
from predkmeans.linalg import (
    as_matrix,
    as_vector,
    center,
    mean_rows,
    scatter,
    sym_eigen,
)

from oracles import column_means_loops, scatter_loops


def random_symmetric(rng, d, scale=1.0):
    M = rng.normal(size=(d, d)) * scale
    return (M + M.T) / 2.0


class TestConstruction:
    def test_as_matrix_rejects_nan(self):
        with pytest.raises(DomainError):
            as_matrix([[1.0, float("nan")]])

    def test_as_matrix_rejects_wrong_rank(self):
        with pytest.raises(DomainError):
            as_matrix([1.0, 2.0])

    def test_as_vector_rejects_inf(self):
        with pytest.raises(DomainError):
            as_vector([float("inf")])


class TestMeanRows:
    def test_forced_arithmetic(self):
        assert mean_rows([[1, 2], [3, 4]]).tolist() == [2.0, 3.0]

    def test_constant_rows(self):
        assert mean_rows([[5, 5], [5, 5], [5, 5]]).tolist() == [5.0, 5.0]

    def test_matches_summation_oracle(self):
        rng = np.random.default_rng(7)
        X = rng.normal(size=(7, 3))
        expected = column_means_loops(X.tolist())
        assert np.max(np.abs(mean_rows(X) - expected)) <= 1e-12

    def test_empty_is_domain_error(self):
        with pytest.raises(DomainError):
            mean_rows(np.zeros((0, 3)))


class TestCenter:
    def test_forced_arithmetic(self):
        out = center([[1, 2], [3, 4]], [2, 3])
        assert out.tolist() == [[-1.0, -1.0], [1.0, 1.0]]

    def test_zero_mean_is_identity(self):
        X = np.arange(6.0).reshape(2, 3)
        assert np.array_equal(center(X, np.zeros(3)), X)

    def test_centering_by_own_mean_zeroes_columns(self):
        rng = np.random.default_rng(11)
        X = rng.normal(size=(5, 4)) * 3.0
        out = center(X, mean_rows(X))
        assert np.max(np.abs(out.sum(axis=0))) <= 1e-10

    def test_dimension_mismatch(self):
        with pytest.raises(DomainError):
            center([[1, 2]], [1, 2, 3])


class TestScatter:
    def test_forced_arithmetic(self):
        out = scatter([[1, 1], [-1, -1]])
        assert out.tolist() == [[1.0, 1.0], [1.0, 1.0]]

    def test_zero_matrix(self):
        assert scatter(np.zeros((3, 2))).tolist() == [[0.0, 0.0], [0.0, 0.0]]

    def test_matches_triple_loop_oracle(self):
        rng = np.random.default_rng(13)
        X = rng.normal(size=(6, 3))
        expected = np.array(scatter_loops(X.tolist()))
        assert np.max(np.abs(scatter(X) - expected)) <= 1e-10

    def test_symmetric_and_psd(self):
        rng = np.random.default_rng(17)
        X = rng.normal(size=(8, 5)) * 2.0
        C = scatter(X)
        assert np.max(np.abs(C - C.T)) <= 1e-12
        for _ in range(100):
            x = rng.normal(size=5)
            assert x @ C @ x >= -1e-9

    def test_empty_is_domain_error(self):
        with pytest.raises(DomainError):
            scatter(np.zeros((0, 2)))


class TestSymEigen:
    def test_hand_derived_two_by_two(self):
        # Characteristic polynomial of [[1,1],[1,1]] gives roots 2 and 0.
        pairs = sym_eigen(np.array([[1.0, 1.0], [1.0, 1.0]]))
        assert np.allclose(pairs.eigenvalues, [2.0, 0.0], atol=1e-12)
        v = pairs.eigenvectors[:, 0]
        assert np.allclose(np.abs(v), [1 / np.sqrt(2)] * 2, atol=1e-12)
        assert v[0] > 0  # sign convention

    def test_identity(self):
        pairs = sym_eigen(np.eye(3))
        assert np.allclose(pairs.eigenvalues, [1.0, 1.0, 1.0])
        assert np.allclose(pairs.eigenvectors.T @ pairs.eigenvectors, np.eye(3),
                           atol=1e-8)

    def test_diagonal_permutation(self):
        pairs = sym_eigen(np.diag([5.0, 2.0, 9.0]))
        assert pairs.eigenvalues.tolist() == [9.0, 5.0, 2.0]
        # Eigenvectors are the axes matching each diagonal position.
        expected_axes = [2, 0, 1]
        for col, axis in enumerate(expected_axes):
            v = np.zeros(3)
            v[axis] = 1.0
            assert np.allclose(pairs.eigenvectors[:, col], v, atol=1e-12)

    def test_non_square_rejected(self):
        with pytest.raises(DomainError):
            sym_eigen(np.zeros((2, 3)))

    def test_asymmetric_rejected(self):
        with pytest.raises(DomainError):
            sym_eigen(np.array([[0.0, 1.0], [0.0, 0.0]]))

    def test_budget_exhaustion_reports_offdiagonal_norm(self):
        C = np.array([[0.0, 1.0], [1.0, 0.0]])
        with pytest.raises(NumericalError) as info:
            sym_eigen(C, max_sweeps=0)
        assert info.value.off_diagonal_norm is not None
        assert info.value.off_diagonal_norm > 0.0

    def test_reconstruction_on_random_matrices(self):
        rng = np.random.default_rng(23)
        for _ in range(30):
            d = int(rng.integers(2, 21))
            C = random_symmetric(rng, d, scale=rng.uniform(0.1, 10.0))
            pairs = sym_eigen(C)
            V, lam = pairs.eigenvectors, pairs.eigenvalues
            scale = max(1.0, float(np.abs(C).max()))
            assert np.max(np.abs(V @ np.diag(lam) @ V.T - C)) <= 1e-8 * scale
            assert np.max(np.abs(V.T @ V - np.eye(d))) <= 1e-8
            assert np.all(np.diff(lam) <= 1e-12)

    def test_residual_per_pair(self):
        rng = np.random.default_rng(29)
        C = random_symmetric(rng, 12, scale=4.0)
        pairs = sym_eigen(C)
        for i in range(12):
            lam = pairs.eigenvalues[i]
            v = pairs.eigenvectors[:, i]
            assert np.max(np.abs(C @ v - lam * v)) <= 1e-8 * max(1.0, abs(lam))

    def test_eigenvalue_sum_matches_trace(self):
        rng = np.random.default_rng(31)
        for _ in range(20):
            C = random_symmetric(rng, int(rng.integers(2, 15)), scale=3.0)
            lam = sym_eigen(C).eigenvalues
            trace = float(np.trace(C))
            assert abs(lam.sum() - trace) <= 1e-8 * max(1.0, abs(trace))

    def test_zero_matrix(self):
        pairs = sym_eigen(np.zeros((4, 4)))
        assert np.array_equal(pairs.eigenvalues, np.zeros(4))
