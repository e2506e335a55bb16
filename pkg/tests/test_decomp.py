from   hypothesis import given, settings, strategies as st
import numpy as np
import pytest
import sys
sys.path.append('..')

from fttrpca.decomp import *
from fttrpca.exceptions import DimensionMismatch, InvalidArgument
from fttrpca.tensor_core import tt_unfold


def test_ttformat_properties():
    tt = TTFormat.random((4, 5, 6), (2, 3), np.random.default_rng(0))
    assert tt.order == 3
    assert tt.dims == (4, 5, 6)
    assert tt.ranks == (2, 3)
    assert [core.shape for core in tt.cores] == [(1, 4, 2), (2, 5, 3), (3, 6, 1)]


def test_ttformat_validation():
    with pytest.raises(DimensionMismatch):
        TTFormat((np.zeros((1, 3, 1)),))
    with pytest.raises(DimensionMismatch):
        TTFormat((np.zeros((2, 3, 2)), np.zeros((2, 3, 1))))
    with pytest.raises(DimensionMismatch):
        TTFormat((np.zeros((1, 3, 2)), np.zeros((3, 3, 1))))
    with pytest.raises(DimensionMismatch):
        TTFormat.random((4, 5, 6), (2,), np.random.default_rng(0))
    with pytest.raises(InvalidArgument):
        TTFormat.random((4, 5, 6), (2, 0), np.random.default_rng(0))


def test_tt_contract_matches_direct_sum():
    tt = TTFormat.random((3, 4, 5), (2, 3), np.random.default_rng(1))
    g1, g2, g3 = tt.cores
    expected = np.einsum('aib,bjc,ckd->ijk', g1, g2, g3)
    assert np.allclose(tt_contract(tt), expected)


def test_tt_contract_rank():
    tt = TTFormat.random((6, 7, 8, 5), (2, 3, 2), np.random.default_rng(2))
    x = tt_contract(tt)
    for k, r in enumerate(tt.ranks, start = 1):
        sigma = np.linalg.svd(tt_unfold(x, k), compute_uv = False)
        assert sigma[r] <= 1e-10 * sigma[0]


def test_tucker_compress_shapes():
    tt = TTFormat.random((10, 10, 10), (2, 2), np.random.default_rng(3))
    compressed = tucker_compress(tt)
    assert compressed.rank == (2, 4, 2)
    assert compressed.core.shape == (2, 4, 2)
    for u in compressed.factors:
        assert np.allclose(u.T @ u, np.eye(u.shape[1]))


def test_tucker_compress_keeps_small_cores():
    tt = TTFormat.random((2, 3, 2), (2, 2), np.random.default_rng(4))
    compressed = tucker_compress(tt)
    assert compressed.rank == (2, 3, 2)
    assert all(np.array_equal(u, np.eye(u.shape[0])) for u in compressed.factors)
    assert np.allclose(compressed.full(), tt_contract(tt))


@settings(max_examples = 50, deadline = None)
@given(seed = st.integers(0, 2**32 - 1), order = st.sampled_from([3, 4]),
       data = st.data())
def test_compression_preserves_tensor_and_norm(seed, order, data):
    dims = data.draw(st.lists(st.integers(2, 16),
                              min_size = order, max_size = order))
    ranks = data.draw(st.lists(st.integers(1, 4), min_size = order - 1,
                               max_size = order - 1))
    tt = TTFormat.random(dims, ranks, np.random.default_rng(seed))
    x = tt_contract(tt)
    compressed = tucker_compress(tt)
    scale = np.linalg.norm(x)
    assert np.linalg.norm(compressed.full() - x) <= 1e-10 * scale
    alpha = default_alpha(dims)
    full_norm = ttnn(x, alpha)
    core_norm = ttnn(compressed.core, alpha)
    assert abs(full_norm - core_norm) <= 1e-8 * full_norm


def test_ttnn_of_matrix_is_nuclear_norm():
    m = np.random.default_rng(5).standard_normal((5, 7))
    assert ttnn(m, [1.0]) == pytest.approx(np.linalg.norm(m, 'nuc'))


def test_ttnn_weights():
    t = np.random.default_rng(6).standard_normal((3, 4, 5))
    first = np.linalg.norm(tt_unfold(t, 1), 'nuc')
    assert ttnn(t, [1.0, 0.0]) == pytest.approx(first)
    with pytest.raises(DimensionMismatch):
        ttnn(t, [1.0])
    with pytest.raises(InvalidArgument):
        ttnn(t, [1.0, -0.5])


def test_default_alpha():
    assert np.allclose(default_alpha((30, 30, 30, 30)), [1/32, 15/16, 1/32])
    assert np.allclose(default_alpha((4, 5)), [1.0])
    assert split_sizes((2, 3, 4)) == [2, 4]


def test_ttnn_of_rank_one_tensor():
    rng = np.random.default_rng(7)
    vectors = [v / np.linalg.norm(v) for v in
               (rng.standard_normal(d) for d in (3, 4, 5, 2))]
    t = np.einsum('i,j,k,l->ijkl', *vectors)
    assert ttnn(t, [1.0, 1.0, 1.0]) == pytest.approx(3.0)
    assert ttnn(np.zeros((3, 4, 5)), [0.5, 0.5]) == 0


@settings(max_examples = 50, deadline = None)
@given(seed = st.integers(0, 2**32 - 1), c = st.floats(-10, 10))
def test_ttnn_is_homogeneous(seed, c):
    t = np.random.default_rng(seed).standard_normal((3, 4, 5))
    alpha = [0.3, 0.7]
    assert ttnn(c * t, alpha) == pytest.approx(abs(c) * ttnn(t, alpha),
                                               rel = 1e-10, abs = 1e-12)


@pytest.mark.parametrize('seed', range(10))
def test_ttnn_bounds_each_weighted_term(seed):
    rng = np.random.default_rng(seed)
    t = rng.standard_normal((4, 4, 4, 4))
    alpha = [1/3, 1/3, 1/3]
    total = ttnn(t, alpha)
    terms = [a * np.linalg.norm(tt_unfold(t, k), 'nuc')
             for k, a in enumerate(alpha, start = 1)]
    assert total == pytest.approx(sum(terms))
    assert all(total >= term - 1e-12 for term in terms)
