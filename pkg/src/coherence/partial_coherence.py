"""Fidelity and affinity partial coherence with their closest partial-incoherent states.

All work happens in the local frame, where the reference basis of party a is
the computational one; witnesses are mapped back before they are returned.
"""
import logging
from typing import List, Optional, Tuple

import numpy as np

from ..linalg import kernels
from ..metrics.distances import distance
from ..models.data_models import (
    BipartiteState,
    CoherenceMethod,
    CoherenceReport,
    DensityMatrix,
    DistanceKind,
    Ensemble,
    Exactness,
    OptimizerCertificate,
)
from ..qsd.discrimination import helstrom, lsm_error
from ..qsd.vn_optimizer import DEFAULT_RESTARTS, optimal_vn
from ..states.structure import from_local_frame, is_linearly_independent, local_frame
from ..states.validators import validate_bipartite, validate_density, validate_ensemble

logger = logging.getLogger("partial_coherence")

ZERO_WEIGHT_TOL = 1e-12


def _clip_unit(value: float) -> float:
    return float(min(1.0, max(0.0, value)))


def _block(m: np.ndarray, n_b: int, i: int) -> np.ndarray:
    return kernels.diagonal_block(m, n_b, i)


def qsd_task(state: BipartiteState) -> Tuple[np.ndarray, List[int], Ensemble]:
    """
    sqrt(rho), the surviving labels and {omega_i, eta_i}, all in the local frame.

    omega_i = sqrt(rho) (|i><i| (x) I) sqrt(rho) / eta_i with
    eta_i = tr <i| rho |i>; labels with eta_i < 1e-12 are dropped.
    """
    local = local_frame(state)
    root = kernels.psd_sqrt(local)
    kept, priors, members = [], [], []
    for i in range(state.n_a):
        eta = float(np.real(np.trace(_block(local, state.n_b, i))))
        if eta < ZERO_WEIGHT_TOL:
            continue
        projector = kernels.block_projector(state.n_a, state.n_b, i)
        kept.append(i)
        priors.append(eta)
        members.append(root @ projector @ root / eta)
    if len(kept) < state.n_a:
        logger.debug(f"Dropped {state.n_a - len(kept)} zero-weight block(s)")
    priors = np.asarray(priors)
    return root, kept, validate_ensemble(priors / priors.sum(), members)


def qsd_ensemble_of(state: BipartiteState) -> Ensemble:
    """
    Discrimination task {omega_i, eta_i} whose vN error equals C^a_F(rho).

    Args:
        state: Bipartite state

    Returns:
        Ensemble on the joint space with sum_i eta_i omega_i = rho
    """
    _, _, task = qsd_task(state)
    return validate_ensemble(
        task.priors,
        [from_local_frame(omega, state) for omega in task.states],
    )


def witness_from_projectors(
    root: np.ndarray,
    projectors: List[np.ndarray],
    labels: List[int],
    n_a: int,
    n_b: int
) -> np.ndarray:
    """
    sum_i |i><i| (x) <i| sqrt(rho) pi_i sqrt(rho) |i>, normalised to unit trace.

    Its fidelity with rho is at least sqrt(success probability of {pi_i}),
    with equality at the optimal measurement.
    """
    sigma = np.zeros((n_a * n_b, n_a * n_b), dtype=complex)
    for label, pi in zip(labels, projectors):
        sl = slice(label * n_b, (label + 1) * n_b)
        sigma[sl, sl] = _block(root @ pi @ root, n_b, label)
    return sigma / np.real(np.trace(sigma))


def _global_density(m_local: np.ndarray, state: BipartiteState) -> DensityMatrix:
    return validate_density(from_local_frame(m_local, state))


def fidelity_partial_coherence(
    state: BipartiteState,
    restarts: int = DEFAULT_RESTARTS,
    seed: int = 0
) -> CoherenceReport:
    """
    C^a_F(rho) = 1 - best vN success probability for {omega_i, eta_i}.

    Two surviving blocks go through the Helstrom measurement and are exact.
    More blocks use the vN optimizer; the value counts as exact only when the
    omega_i are linearly independent and the search converged.

    Args:
        state: Bipartite state
        restarts: Random restarts per rank composition for the vN optimizer
        seed: Optimizer seed

    Returns:
        CoherenceReport whose cpis is built from the optimal projectors
    """
    root, kept, task = qsd_task(state)
    n_a, n_b = state.n_a, state.n_b
    certificate: Optional[OptimizerCertificate] = None

    if len(task) == 1:
        projectors = [np.eye(state.dim, dtype=complex)]
        success = 1.0
        method, exactness = CoherenceMethod.HELSTROM_REDUCTION, Exactness.EXACT
    elif len(task) == 2:
        result = helstrom(task)
        projectors = result.measurement.effects
        success = result.success_prob
        method, exactness = CoherenceMethod.HELSTROM_REDUCTION, Exactness.EXACT
    else:
        result = optimal_vn(task, restarts=restarts, seed=seed)
        projectors = result.measurement.effects
        success = result.success_prob
        certificate = result.certificate
        method = CoherenceMethod.VN_OPTIMIZED
        exact = certificate.converged and is_linearly_independent(task)
        exactness = Exactness.EXACT if exact else Exactness.UPPER_BOUND

    cpis = _global_density(witness_from_projectors(root, projectors, kept, n_a, n_b), state)
    value = _clip_unit(1.0 - success)
    # the optimal POVM succeeds with probability at most sqrt(P_S of the least-square measurement)
    lower = _clip_unit(1.0 - np.sqrt(1.0 - lsm_error(task)))
    return CoherenceReport(
        value=value,
        kind=DistanceKind.FIDELITY,
        cpis=cpis,
        method=method,
        exactness=exactness,
        certificate=certificate,
        diagnostics={
            "cpis_distance": distance(state.state, cpis, DistanceKind.FIDELITY),
            "error_lower_bound": lower,
        },
    )


def affinity_blocks(state: BipartiteState) -> Tuple[np.ndarray, List[np.ndarray]]:
    """sqrt(rho) in the local frame and its diagonal blocks B_i."""
    root = kernels.psd_sqrt(local_frame(state))
    return root, [_block(root, state.n_b, i) for i in range(state.n_a)]


def affinity_partial_coherence(state: BipartiteState) -> CoherenceReport:
    """
    C^a_A(rho) = 1 - sum_i tr(B_i^2), B_i = <i| sqrt(rho) |i>.

    The closest partial-incoherent state is sum_i |i><i| (x) B_i^2 / sum_i tr(B_i^2),
    which is the eigenvector form with weights q_ij proportional to the
    squared eigenvalues of B_i.

    Args:
        state: Bipartite state

    Returns:
        Exact CoherenceReport
    """
    _, blocks = affinity_blocks(state)
    squares = [b @ b for b in blocks]
    total = float(sum(np.real(np.trace(s)) for s in squares))

    n_b = state.n_b
    sigma = np.zeros((state.dim, state.dim), dtype=complex)
    for i, s in enumerate(squares):
        sigma[i * n_b:(i + 1) * n_b, i * n_b:(i + 1) * n_b] = s
    cpis = _global_density(sigma / total, state)

    return CoherenceReport(
        value=_clip_unit(1.0 - total),
        kind=DistanceKind.AFFINITY,
        cpis=cpis,
        method=CoherenceMethod.CLOSED_FORM_AFFINITY,
        exactness=Exactness.EXACT,
        diagnostics={"cpis_distance": distance(state.state, cpis, DistanceKind.AFFINITY)},
    )


def skew_information_coherence(state: BipartiteState) -> float:
    """
    sum_i [tr(rho Pi_i) - tr(sqrt(rho) Pi_i sqrt(rho) Pi_i)] with Pi_i = |i><i| (x) I.

    Wigner-Yanase form of the affinity partial coherence, kept as an
    independent cross-check.
    """
    rho = state.matrix
    root = kernels.psd_sqrt(rho)
    total = 0.0
    for i in range(state.n_a):
        alpha = state.basis_a[:, i]
        pi = np.kron(np.outer(alpha, alpha.conj()), np.eye(state.n_b))
        total += np.real(np.trace(rho @ pi) - np.trace(root @ pi @ root @ pi))
    return float(total)


def partial_coherence(
    state: BipartiteState,
    kind: DistanceKind = DistanceKind.FIDELITY,
    restarts: int = DEFAULT_RESTARTS,
    seed: int = 0
) -> CoherenceReport:
    if DistanceKind(kind) is DistanceKind.FIDELITY:
        return fidelity_partial_coherence(state, restarts, seed)
    return affinity_partial_coherence(state)


def _as_single_party(rho, basis: Optional[np.ndarray]) -> BipartiteState:
    density = rho if isinstance(rho, DensityMatrix) else validate_density(rho)
    return validate_bipartite(density, density.dim, 1, basis)


def fidelity_coherence(
    rho,
    basis: Optional[np.ndarray] = None,
    restarts: int = DEFAULT_RESTARTS,
    seed: int = 0
) -> CoherenceReport:
    """Geometric coherence of a single system: partial coherence with n_b = 1."""
    return fidelity_partial_coherence(_as_single_party(rho, basis), restarts, seed)


def affinity_coherence(rho, basis: Optional[np.ndarray] = None) -> CoherenceReport:
    """1 - sum_i <i| sqrt(rho) |i>^2 in the given basis."""
    return affinity_partial_coherence(_as_single_party(rho, basis))


def coherence(
    rho,
    kind: DistanceKind = DistanceKind.FIDELITY,
    basis: Optional[np.ndarray] = None,
    restarts: int = DEFAULT_RESTARTS,
    seed: int = 0
) -> CoherenceReport:
    if DistanceKind(kind) is DistanceKind.FIDELITY:
        return fidelity_coherence(rho, basis, restarts, seed)
    return affinity_coherence(rho, basis)
