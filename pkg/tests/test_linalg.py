"""Tests for the dense matrix kernels."""
import numpy as np
import pytest
from scipy.linalg import expm

from src.linalg import kernels
from src.states.generators import random_density
from src.utils.errors import DimensionMismatch, NonHermitian, NonSquare, NotFinite, NotPsd


@pytest.mark.parametrize("dim", [2, 3, 5])
@pytest.mark.parametrize("seed", [0, 1])
def test_psd_sqrt_squares_back(dim, seed):
    rho = random_density(dim, seed=seed).matrix
    root = kernels.psd_sqrt(rho)
    np.testing.assert_allclose(root @ root, rho, atol=1e-10)
    np.testing.assert_allclose(root, root.conj().T, atol=1e-12)


def test_psd_sqrt_clips_rounding_noise():
    root = kernels.psd_sqrt(np.diag([1.0, -1e-13]))
    np.testing.assert_allclose(root, np.diag([1.0, 0.0]), atol=1e-12)


def test_psd_sqrt_rejects_negative_matrix():
    with pytest.raises(NotPsd):
        kernels.psd_sqrt(np.diag([1.0, -1e-3]))


def test_psd_inv_sqrt_is_pseudo_inverse_on_support():
    m = np.diag([0.25, 0.0, 4.0])
    np.testing.assert_allclose(kernels.psd_inv_sqrt(m), np.diag([2.0, 0.0, 0.5]), atol=1e-12)
    np.testing.assert_allclose(kernels.support_projector(m), np.diag([1.0, 0.0, 1.0]), atol=1e-12)


def test_hermitian_part_rejects_non_hermitian():
    with pytest.raises(NonHermitian):
        kernels.hermitian_part(np.array([[0.0, 1.0], [0.0, 0.0]]))


def test_as_matrix_checks_shape_and_finiteness():
    with pytest.raises(NonSquare):
        kernels.require_square(np.ones(3))
    with pytest.raises(NonSquare):
        kernels.require_square(np.ones((2, 3)))
    with pytest.raises(NotFinite):
        kernels.as_matrix([[1.0, np.nan], [0.0, 1.0]])


def test_trace_norm_and_positive_part():
    h = np.diag([1.0, -2.0, 0.0])
    assert abs(kernels.trace_norm(h) - 3.0) < 1e-12
    positive, proj = kernels.positive_part(h)
    np.testing.assert_allclose(positive, np.diag([1.0, 0.0, 0.0]), atol=1e-12)
    # zero modes are not part of the positive projector
    np.testing.assert_allclose(proj, np.diag([1.0, 0.0, 0.0]), atol=1e-12)


@pytest.mark.parametrize("n_a,n_b", [(2, 2), (2, 3), (3, 2)])
def test_partial_trace_of_product(n_a, n_b):
    a = random_density(n_a, seed=3).matrix
    b = random_density(n_b, seed=4).matrix
    joint = np.kron(a, b)
    np.testing.assert_allclose(kernels.partial_trace(joint, n_a, n_b, "a"), a, atol=1e-12)
    np.testing.assert_allclose(kernels.partial_trace(joint, n_a, n_b, "b"), b, atol=1e-12)


def test_partial_trace_rejects_bad_split():
    with pytest.raises(DimensionMismatch):
        kernels.partial_trace(np.eye(5), 2, 2)


@pytest.mark.parametrize("k", [1, 2, 3])
def test_hermitian_from_params_generates_unitaries(k):
    params = np.random.default_rng(k).normal(size=k * k)
    h = kernels.hermitian_from_params(params, k)
    np.testing.assert_allclose(h, h.conj().T, atol=1e-14)
    assert kernels.unitarity_defect(expm(1j * h)) < 1e-12


def test_block_helpers():
    proj = kernels.block_projector(2, 3, 1)
    assert np.trace(proj).real == 3
    m = np.arange(36, dtype=complex).reshape(6, 6)
    np.testing.assert_array_equal(kernels.diagonal_block(m, 3, 1), m[3:6, 3:6])


def _random_hermitian(dim: int, seed: int) -> np.ndarray:
    rng = np.random.default_rng(seed)
    g = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    return (g + g.conj().T) / 2


@pytest.mark.parametrize("dim", range(2, 9))
def test_eigh_reconstructs_hermitian_matrices(dim):
    for seed in range(100):
        h = _random_hermitian(dim, seed)
        spectrum = kernels.eigh(h)
        assert np.all(np.diff(spectrum.eigenvalues) >= 0)
        np.testing.assert_allclose(kernels.reconstruct(spectrum), h, atol=1e-10)


@pytest.mark.parametrize("seed", range(5))
def test_trace_norm_is_unitarily_invariant(seed):
    rng = np.random.default_rng(seed)
    m = rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))
    u = expm(1j * _random_hermitian(4, seed + 10))
    w = expm(1j * _random_hermitian(4, seed + 20))
    assert abs(kernels.trace_norm(u @ m @ w) - kernels.trace_norm(m)) < 1e-10


@pytest.mark.parametrize("seed", range(5))
def test_jordan_decomposition(seed):
    h = _random_hermitian(5, seed)
    positive, _ = kernels.positive_part(h)
    negative, _ = kernels.positive_part(-h)
    np.testing.assert_allclose(positive - negative, h, atol=1e-10)
    np.testing.assert_allclose(positive @ negative, np.zeros((5, 5)), atol=1e-10)
    assert abs(kernels.trace_norm(h) - np.trace(positive + negative).real) < 1e-10


@pytest.mark.parametrize("seed", range(3))
def test_psd_inv_sqrt_on_random_rank_deficient_matrix(seed):
    m = 2.0 * random_density(5, rank=3, seed=seed).matrix
    inv_root = kernels.psd_inv_sqrt(m)
    support = kernels.support_projector(m)
    root = kernels.psd_sqrt(m)
    np.testing.assert_allclose(inv_root @ root, support, atol=1e-8)
    np.testing.assert_allclose(inv_root @ m @ inv_root, support, atol=1e-8)
    np.testing.assert_allclose(inv_root @ (np.eye(5) - support), np.zeros((5, 5)), atol=1e-8)


@pytest.mark.parametrize("seed", range(5))
def test_psd_sqrt_keeps_kernel_of_rank_deficient_matrices(seed):
    psi = np.random.default_rng(seed).standard_normal(4) + 0j
    psi /= np.linalg.norm(psi)
    rho = np.outer(psi, psi.conj())
    root = kernels.psd_sqrt(rho)
    np.testing.assert_allclose(root, rho, atol=1e-12)
    kernel = np.eye(4) - rho
    np.testing.assert_allclose(root @ kernel, np.zeros((4, 4)), atol=1e-12)
