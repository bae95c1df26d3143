"""Structural operations and predicates on bipartite states and ensembles."""
import logging
from typing import Optional, Sequence

import numpy as np

from ..linalg import kernels
from ..models.data_models import BipartiteState, DensityMatrix, Ensemble, SchmidtForm
from ..utils.errors import DimensionMismatch
from .validators import ensure_density, validate_bipartite, validate_density, validate_unit_vector

logger = logging.getLogger("partial_coherence")

LINEAR_INDEPENDENCE_REL_TOL = 1e-8


def local_unitary(state: BipartiteState) -> np.ndarray:
    """U_a (x) I_b, mapping computational labels to the reference basis."""
    return np.kron(state.basis_a, np.eye(state.n_b))


def local_frame(state: BipartiteState) -> np.ndarray:
    """The state's matrix written in its reference basis of party a."""
    w = local_unitary(state)
    return kernels.dagger(w) @ state.matrix @ w


def from_local_frame(m: np.ndarray, state: BipartiteState) -> np.ndarray:
    """Inverse of local_frame for any operator on the joint space."""
    w = local_unitary(state)
    return w @ m @ kernels.dagger(w)


def rebase(state: BipartiteState, basis_a: np.ndarray) -> BipartiteState:
    """Same state with a different reference basis for party a."""
    return validate_bipartite(state.state, state.n_a, state.n_b, basis_a)


def reduced_state(state: BipartiteState, keep: kernels.Party = "a") -> DensityMatrix:
    return validate_density(kernels.partial_trace(state.matrix, state.n_a, state.n_b, keep))


def pinch_blocks(m: np.ndarray, n_a: int, n_b: int) -> np.ndarray:
    """Keep only the diagonal (i, i) blocks of a matrix on a (x) b."""
    out = np.zeros_like(m)
    for i in range(n_a):
        sl = slice(i * n_b, (i + 1) * n_b)
        out[sl, sl] = m[sl, sl]
    return out


def luders_project(state: BipartiteState) -> DensityMatrix:
    """
    Apply the Lueders measurement sum_i (|i><i| (x) I) rho (|i><i| (x) I).

    Args:
        state: Bipartite state; |i> runs over its reference basis

    Returns:
        Projected state, partial incoherent by construction
    """
    local = pinch_blocks(local_frame(state), state.n_a, state.n_b)
    return validate_density(from_local_frame(local, state))


def is_partial_incoherent(state: BipartiteState, tol: float = 1e-9) -> bool:
    """True iff the state is a fixed point of the Lueders measurement within tol."""
    local = local_frame(state)
    deviation = np.max(np.abs(local - pinch_blocks(local, state.n_a, state.n_b)))
    return bool(deviation <= tol)


def is_linearly_independent(ensemble: Ensemble, tol: float = 1e-10) -> bool:
    """
    Check whether the supports of the members are linearly independent.

    Eigenvectors with eigenvalue above tol from every member are stacked as
    columns; the ensemble is independent iff the stack has full column rank.

    Args:
        ensemble: Ensemble to check
        tol: Eigenvalue threshold for the support of each member

    Returns:
        True when the stacked supports have full column rank
    """
    columns = []
    for rho in ensemble.states:
        spectrum = kernels.eigh(rho)
        keep = spectrum.eigenvalues > tol
        columns.append(spectrum.eigenvectors[:, keep])
    stack = np.hstack(columns)
    if stack.shape[1] == 0:
        return True
    if stack.shape[1] > stack.shape[0]:
        return False
    singular = np.linalg.svd(stack, compute_uv=False)
    rank = int(np.sum(singular > LINEAR_INDEPENDENCE_REL_TOL * singular[0]))
    return rank == stack.shape[1]


def schmidt(psi: Sequence[complex], n_a: int, n_b: int) -> SchmidtForm:
    """
    Schmidt decomposition psi = sum_i sqrt(lambda_i) |x_i> (x) |y_i>.

    Args:
        psi: Unit vector of length n_a * n_b
        n_a: Dimension of party a
        n_b: Dimension of party b

    Returns:
        SchmidtForm with the squared amplitudes lambda_i in descending order
    """
    vec = validate_unit_vector(psi)
    if vec.size != n_a * n_b:
        raise DimensionMismatch(f"Vector of length {vec.size} does not split as {n_a} x {n_b}")
    u, s, vh = np.linalg.svd(vec.reshape(n_a, n_b), full_matrices=False)
    keep = s > 1e-10 * s[0]
    return SchmidtForm(
        coefficients=s[keep] ** 2,
        basis_a=u[:, keep],
        basis_b=vh[keep, :].T,
    )


def pure_density(psi: Sequence[complex]) -> DensityMatrix:
    vec = validate_unit_vector(psi)
    return validate_density(np.outer(vec, vec.conj()))


def bell_state(dim: int = 2) -> BipartiteState:
    """Maximally entangled state sum_i |ii>/sqrt(dim) on dim (x) dim."""
    psi = np.zeros(dim * dim, dtype=complex)
    for i in range(dim):
        psi[i * dim + i] = 1.0
    psi /= np.sqrt(dim)
    return validate_bipartite(pure_density(psi), dim, dim)


def product_state(
    rho_a,
    rho_b,
    basis_a: Optional[np.ndarray] = None
) -> BipartiteState:
    a = ensure_density(rho_a)
    b = ensure_density(rho_b)
    return validate_bipartite(np.kron(a.matrix, b.matrix), a.dim, b.dim, basis_a)


def classical_state(
    probs: Sequence[float],
    basis_a: np.ndarray,
    sigmas: Sequence,
    reference_basis: Optional[np.ndarray] = None
) -> BipartiteState:
    """
    sum_i p_i |alpha_i><alpha_i| (x) sigma_i with alpha_i the columns of basis_a.

    Args:
        probs: Weights p_i
        basis_a: Orthonormal columns |alpha_i>
        sigmas: States of party b
        reference_basis: Reference basis stored on the result; identity if None

    Returns:
        BipartiteState classical on party a
    """
    sig = [ensure_density(s) for s in sigmas]
    n_a = basis_a.shape[0]
    n_b = sig[0].dim
    total = np.zeros((n_a * n_b, n_a * n_b), dtype=complex)
    for p, alpha, s in zip(probs, basis_a.T, sig):
        total += p * np.kron(np.outer(alpha, alpha.conj()), s.matrix)
    return validate_bipartite(total, n_a, n_b, reference_basis)


def partial_incoherent_state(probs: Sequence[float], sigmas: Sequence) -> BipartiteState:
    """sum_i p_i |i><i| (x) sigma_i in the computational basis."""
    n_a = len(probs)
    return classical_state(probs, np.eye(n_a, dtype=complex), sigmas)
