"""Dense Hermitian matrix kernels shared by every other package."""
import logging
from typing import Literal, Optional, Tuple

import numpy as np

from ..models.data_models import Spectrum
from ..utils.errors import DimensionMismatch, NonHermitian, NonSquare, NotFinite, NotPsd

logger = logging.getLogger("partial_coherence")

HERMITIAN_TOL = 1e-8
# eigenvalues in [-CLIP_REL_TOL * max(1, lambda_max), 0) are floating-point noise
CLIP_REL_TOL = 1e-10
SUPPORT_REL_TOL = 1e-10
POSITIVE_TIE_TOL = 1e-12
# eigenvalues at or below SQRT_NOISE_REL_TOL * lambda_max are rounding noise of zero modes
SQRT_NOISE_REL_TOL = 1e-14

Party = Literal["a", "b"]


def as_matrix(m) -> np.ndarray:
    """
    Convert input to a finite complex 2-D array.

    Args:
        m: Anything numpy can turn into a matrix

    Returns:
        complex128 ndarray
    """
    arr = np.asarray(m, dtype=complex)
    if arr.ndim != 2:
        raise NonSquare(f"Expected a matrix, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise NotFinite("Matrix has NaN or infinite entries")
    return arr


def dagger(m: np.ndarray) -> np.ndarray:
    return np.conj(m).T


def require_square(m) -> np.ndarray:
    arr = as_matrix(m)
    if arr.shape[0] != arr.shape[1]:
        raise NonSquare(f"Expected a square matrix, got shape {arr.shape}")
    return arr


def hermitian_part(h, tol: float = HERMITIAN_TOL) -> np.ndarray:
    """
    Return (H + H^dagger)/2 after checking H is Hermitian within tol.

    Args:
        h: Square matrix
        tol: Largest allowed max-abs entry of H - H^dagger

    Returns:
        Symmetrized matrix
    """
    arr = require_square(h)
    deviation = float(np.max(np.abs(arr - dagger(arr)))) if arr.size else 0.0
    if deviation > tol:
        raise NonHermitian(f"Hermiticity deviation {deviation:.3e} exceeds {tol:.1e}")
    return (arr + dagger(arr)) / 2


def eigh(h) -> Spectrum:
    """
    Eigendecomposition of a Hermitian matrix.

    Args:
        h: Hermitian matrix, symmetrized before decomposition

    Returns:
        Spectrum with ascending eigenvalues
    """
    sym = hermitian_part(h)
    values, vectors = np.linalg.eigh(sym)
    return Spectrum(eigenvalues=values, eigenvectors=vectors)


def reconstruct(spectrum: Spectrum, values: Optional[np.ndarray] = None) -> np.ndarray:
    """V diag(values) V^dagger, defaulting to the spectrum's own eigenvalues."""
    vals = spectrum.eigenvalues if values is None else values
    vecs = spectrum.eigenvectors
    return (vecs * vals) @ dagger(vecs)


def _clipped_spectrum(h) -> Tuple[Spectrum, np.ndarray]:
    spectrum = eigh(h)
    values = spectrum.eigenvalues
    if values.size == 0:
        return spectrum, values
    floor = -CLIP_REL_TOL * max(1.0, float(values[-1]))
    if values[0] < floor:
        raise NotPsd(f"Smallest eigenvalue {values[0]:.3e} is below {floor:.1e}")
    return spectrum, np.clip(values, 0.0, None)


def clip_psd(h) -> np.ndarray:
    """Matrix with its noise-level negative eigenvalues set to zero."""
    spectrum, values = _clipped_spectrum(h)
    return reconstruct(spectrum, values)


def psd_sqrt(h) -> np.ndarray:
    """
    Principal square root of a positive-semidefinite matrix.

    Eigenvalues at or below SQRT_NOISE_REL_TOL * lambda_max are zeroed first,
    so a rank-deficient input keeps an exact kernel.

    Args:
        h: PSD matrix (negative eigenvalues within the clipping band are allowed)

    Returns:
        V diag(sqrt(clip(lambda))) V^dagger
    """
    spectrum, values = _clipped_spectrum(h)
    if values.size:
        values = np.where(values > SQRT_NOISE_REL_TOL * float(values[-1]), values, 0.0)
    return reconstruct(spectrum, np.sqrt(values))


def psd_inv_sqrt(h, rel_tol: float = SUPPORT_REL_TOL) -> np.ndarray:
    """
    Pseudo-inverse square root on the support of a PSD matrix.

    Args:
        h: PSD matrix
        rel_tol: Eigenvalues at or below rel_tol * lambda_max count as kernel

    Returns:
        V diag(lambda^-1/2 on the support, 0 elsewhere) V^dagger
    """
    spectrum, values = _clipped_spectrum(h)
    if values.size == 0:
        return reconstruct(spectrum, values)
    cutoff = rel_tol * float(values[-1])
    on_support = values > cutoff
    inv = np.zeros_like(values)
    inv[on_support] = 1.0 / np.sqrt(values[on_support])
    return reconstruct(spectrum, inv)


def support_projector(h, rel_tol: float = SUPPORT_REL_TOL) -> np.ndarray:
    """Projector onto eigenvectors of a PSD matrix above rel_tol * lambda_max."""
    spectrum, values = _clipped_spectrum(h)
    if values.size == 0:
        return reconstruct(spectrum, values)
    mask = (values > rel_tol * float(values[-1])).astype(float)
    return reconstruct(spectrum, mask)


def trace_norm(m) -> float:
    """Sum of singular values of a square matrix."""
    arr = require_square(m)
    return float(np.sum(np.linalg.svd(arr, compute_uv=False)))


def positive_part(h) -> Tuple[np.ndarray, np.ndarray]:
    """
    Jordan positive part of a Hermitian matrix and its support projector.

    Zero modes (|lambda| <= POSITIVE_TIE_TOL) are left out of the projector.

    Args:
        h: Hermitian matrix

    Returns:
        Tuple of (Lambda_+, projector onto eigenvalues > POSITIVE_TIE_TOL)
    """
    spectrum = eigh(h)
    values = spectrum.eigenvalues
    positive = reconstruct(spectrum, np.clip(values, 0.0, None))
    projector = reconstruct(spectrum, (values > POSITIVE_TIE_TOL).astype(float))
    return positive, projector


def partial_trace(rho, n_a: int, n_b: int, keep: Party = "a") -> np.ndarray:
    """
    Trace out one party of an (n_a * n_b)-dimensional operator.

    Args:
        rho: Operator on a (x) b
        n_a: Dimension of party a
        n_b: Dimension of party b
        keep: Which party survives

    Returns:
        Reduced operator on the kept party
    """
    arr = require_square(rho)
    if arr.shape[0] != n_a * n_b:
        raise DimensionMismatch(
            f"Operator of size {arr.shape[0]} does not split as {n_a} x {n_b}"
        )
    blocks = arr.reshape(n_a, n_b, n_a, n_b)
    if keep == "a":
        return np.einsum("ijkj->ik", blocks)
    if keep == "b":
        return np.einsum("ijil->jl", blocks)
    raise ValueError(f"keep must be 'a' or 'b', got {keep!r}")


def kron(a, b) -> np.ndarray:
    return np.kron(as_matrix(a), as_matrix(b))


def unitarity_defect(u) -> float:
    """Max-abs entry of U^dagger U - I."""
    arr = require_square(u)
    return float(np.max(np.abs(dagger(arr) @ arr - np.eye(arr.shape[0]))))


def block_projector(n_a: int, n_b: int, i: int) -> np.ndarray:
    """|i><i| (x) I_b in the computational basis of party a."""
    proj = np.zeros((n_a, n_a), dtype=complex)
    proj[i, i] = 1.0
    return np.kron(proj, np.eye(n_b))


def diagonal_block(m: np.ndarray, n_b: int, i: int) -> np.ndarray:
    """(<i| (x) I) M (|i> (x) I) for the computational basis of party a."""
    return m[i * n_b:(i + 1) * n_b, i * n_b:(i + 1) * n_b]


def hermitian_from_params(params: np.ndarray, k: int) -> np.ndarray:
    """k x k Hermitian matrix from k^2 reals: diagonal, then real and imaginary upper parts."""
    h = np.diag(params[:k]).astype(complex)
    rows, cols = np.triu_indices(k, 1)
    off = len(rows)
    h[rows, cols] = params[k:k + off] + 1j * params[k + off:k + 2 * off]
    h[cols, rows] = np.conj(h[rows, cols])
    return h
