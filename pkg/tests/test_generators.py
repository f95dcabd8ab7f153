"""
Tests for synthetic signal and matrix generators
"""
import numpy as np
import pytest

from src.bench.generators import block_sizes, gen_block_sparse_signal, gen_matrix, super_block_edges
from src.core.errors import DomainError, InfeasibleGeometryError
from src.core.models import MatrixKind


def runs(support):
    return 1 + int(np.count_nonzero(np.diff(np.sort(support)) > 1))


class TestBlockSparseSignal:

    def test_single_block_is_contiguous(self, rng):
        for _ in range(50):
            x, support = gen_block_sparse_signal(50, 10, 1, rng)
            assert np.count_nonzero(x) == 10
            assert runs(support) == 1
            assert support[-1] - support[0] == 9

    @pytest.mark.parametrize("n,k,l", [(100, 20, 2), (300, 50, 3), (60, 12, 4)])
    def test_structure(self, rng, n, k, l):
        for _ in range(2000):
            x, support = gen_block_sparse_signal(n, k, l, rng)
            assert np.count_nonzero(x) == k
            assert len(set(support.tolist())) == k
            assert support.min() >= 0 and support.max() < n
            assert runs(support) <= l

    def test_unit_power_coefficients(self, rng):
        power = []
        for _ in range(10_000):
            x, support = gen_block_sparse_signal(40, 10, 2, rng)
            power.append(np.abs(x[support]) ** 2)
        assert np.mean(power) == pytest.approx(1.0, abs=0.05)

    def test_block_sizes_sum_to_k(self):
        sizes = block_sizes(10, np.array([0.25, 0.25, 0.5]))
        assert sizes == [3, 3, 4]
        assert sum(sizes) == 10

    def test_super_block_edges(self):
        assert super_block_edges(100, np.array([0.3, 0.7])) == [0, 30, 100]

    def test_infeasible_geometry(self, rng):
        with pytest.raises(InfeasibleGeometryError):
            gen_block_sparse_signal(30, 30, 30, rng)

    def test_rejects_bad_sizes(self, rng):
        with pytest.raises(DomainError):
            gen_block_sparse_signal(10, 12, 1, rng)
        with pytest.raises(DomainError):
            gen_block_sparse_signal(10, 3, 4, rng)


class TestMatrices:

    def test_scg_power(self, rng):
        A = gen_matrix("scg", 1000, 1000, rng)
        assert np.mean(np.abs(A) ** 2) == pytest.approx(1.0, abs=0.02)

    def test_cropped_hermitian_full_crop(self, rng):
        A = gen_matrix(MatrixKind.CROPPED_HERMITIAN, 12, 12, rng)
        np.testing.assert_allclose(A, A.conj().T, atol=1e-10)

    def test_cropped_hermitian_shape(self, rng):
        assert gen_matrix(MatrixKind.CROPPED_HERMITIAN, 5, 12, rng).shape == (5, 12)

    def test_concat_exp_gauss_right_half(self, rng):
        A = gen_matrix(MatrixKind.CONCAT_EXP_GAUSS, 400, 800, rng)
        right = A[:, 400:]
        assert np.all(right.real >= 0) and np.all(right.imag >= 0)
        assert right.real.mean() == pytest.approx(1 / 3, abs=0.01)
        assert right.imag.mean() == pytest.approx(1 / 3, abs=0.01)

    def test_concat_exp_rates(self, rng):
        A = gen_matrix(MatrixKind.CONCAT_EXP, 400, 800, rng)
        assert np.all(A.imag == 0)
        assert A[:, :400].real.mean() == pytest.approx(1 / 3, abs=0.01)
        assert A[:, 400:].real.mean() == pytest.approx(1.0, abs=0.02)

    def test_real_normal(self, rng):
        A = gen_matrix(MatrixKind.REAL_NORMAL, 10, 20, rng)
        assert np.all(A.imag == 0)

    def test_concat_requires_even_n(self, rng):
        with pytest.raises(DomainError):
            gen_matrix(MatrixKind.CONCAT_EXP, 4, 9, rng)

    def test_unknown_kind_lists_valid(self, rng):
        with pytest.raises(DomainError, match="cropped_hermitian"):
            gen_matrix("toeplitz", 4, 8, rng)

    def test_m_above_n(self, rng):
        with pytest.raises(DomainError):
            gen_matrix("scg", 9, 8, rng)
