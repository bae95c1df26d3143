"""Correlated coherence, its pure-state closed forms and a discord estimate."""
import logging
from typing import Callable, List, Sequence, Tuple

import numpy as np
from scipy.linalg import expm
from scipy.optimize import minimize

from ..coherence.partial_coherence import coherence, partial_coherence
from ..linalg import kernels
from ..models.data_models import (
    BipartiteState,
    CorrelationReport,
    DensityMatrix,
    DistanceKind,
    Exactness,
)
from ..qsd.vn_optimizer import DEFAULT_RESTARTS
from ..states.generators import haar_unitary
from ..states.structure import rebase, reduced_state, schmidt
from ..states.validators import validate_density

logger = logging.getLogger("partial_coherence")

GCC_WARN_TOL = 1e-7
CLUSTER_GAP = 1e-8
INNER_RESTARTS = 3
NELDER_MEAD_OPTIONS = {"xatol": 1e-7, "fatol": 1e-10}
MAX_NM_ITERATIONS = 4000
ITERATIONS_PER_PARAM = 200
STALL_TOL = 1e-10
STALL_EVALS_PER_PARAM = 30


def gcc(
    state: BipartiteState,
    kind: DistanceKind = DistanceKind.FIDELITY,
    restarts: int = DEFAULT_RESTARTS,
    seed: int = 0
) -> float:
    """
    Generalised correlated coherence C^a_X(rho) - C_X(tr_b rho).

    The marginal's coherence is taken in the state's reference basis. The
    difference is not clamped; values below -1e-7 are logged.

    Args:
        state: Bipartite state
        kind: Distance kind
        restarts: vN optimizer restarts when n_a >= 3 with the fidelity kind
        seed: Optimizer seed

    Returns:
        Difference of the two coherences
    """
    joint = partial_coherence(state, kind, restarts, seed).value
    local = coherence(reduced_state(state, "a"), kind, state.basis_a, restarts, seed).value
    value = joint - local
    if value < -GCC_WARN_TOL:
        logger.warning(f"gcc {value:.3e} is negative beyond tolerance ({kind})")
    return float(value)


def eigen_clusters(values: np.ndarray, gap: float = CLUSTER_GAP) -> List[List[int]]:
    """Group ascending eigenvalue indices whose neighbours differ by less than gap."""
    clusters = [[0]]
    for idx in range(1, len(values)):
        if values[idx] - values[idx - 1] < gap:
            clusters[-1].append(idx)
        else:
            clusters.append([idx])
    return clusters


def _cluster_rotation(params: np.ndarray, clusters: Sequence[Sequence[int]], dim: int) -> np.ndarray:
    rotation = np.eye(dim, dtype=complex)
    offset = 0
    for cluster in clusters:
        k = len(cluster)
        if k == 1:
            continue
        block = expm(1j * kernels.hermitian_from_params(params[offset:offset + k * k], k))
        rotation[np.ix_(cluster, cluster)] = block
        offset += k * k
    return rotation


def _coherence_in_basis(
    state: BipartiteState,
    basis: np.ndarray,
    kind: DistanceKind,
    seed: int
):
    return partial_coherence(rebase(state, basis), kind, INNER_RESTARTS, seed)


class _Stalled(Exception):
    pass


def _descend(
    objective: Callable[[np.ndarray], float],
    start: np.ndarray
) -> Tuple[float, np.ndarray]:
    """
    Nelder-Mead from start, stopped early on a flat objective.

    The run ends once STALL_EVALS_PER_PARAM * len(start) evaluations pass
    without the best value dropping by more than STALL_TOL, the noise level
    of the inner partial-coherence evaluation.
    """
    size = max(1, start.size)
    window = STALL_EVALS_PER_PARAM * size
    best = {"value": np.inf, "x": np.array(start), "since": 0}

    def tracked(params: np.ndarray) -> float:
        value = objective(params)
        if value < best["value"] - STALL_TOL:
            best.update(value=value, x=np.array(params), since=0)
            return value
        if value < best["value"]:
            best.update(value=value, x=np.array(params))
        best["since"] += 1
        if best["since"] >= window:
            raise _Stalled
        return value

    options = dict(NELDER_MEAD_OPTIONS, maxiter=min(MAX_NM_ITERATIONS, ITERATIONS_PER_PARAM * size))
    try:
        result = minimize(tracked, start, method="Nelder-Mead", options=options)
    except _Stalled:
        return float(best["value"]), best["x"]
    if result.fun <= best["value"]:
        return float(result.fun), result.x
    return float(best["value"]), best["x"]


def _orthonormalize(u: np.ndarray) -> np.ndarray:
    q, r = np.linalg.qr(u)
    return q * (np.diagonal(r) / np.abs(np.diagonal(r)))


def correlated_coherence(
    state: BipartiteState,
    kind: DistanceKind = DistanceKind.FIDELITY,
    restarts: int = DEFAULT_RESTARTS,
    seed: int = 0
) -> CorrelationReport:
    """
    Partial coherence minimised over the eigenbases of the marginal rho^a.

    The marginal is incoherent in every eigenbasis, so only the joint term
    is minimised. A nondegenerate spectrum fixes the basis up to phases,
    which do not change the value. Degenerate clusters (gap < 1e-8) are
    searched with random-restart Nelder-Mead over per-cluster unitaries
    exp(iH); that result is flagged as an upper bound.

    Args:
        state: Bipartite state
        kind: Distance kind
        restarts: Starts for the cluster search; start 0 is the raw eigenbasis
        seed: Start k draws from default_rng([seed, k])

    Returns:
        CorrelationReport with the best basis found
    """
    spectrum = kernels.eigh(reduced_state(state, "a").matrix)
    eigenbasis = spectrum.eigenvectors
    clusters = eigen_clusters(spectrum.eigenvalues)
    free = sum(len(c) ** 2 for c in clusters if len(c) > 1)

    if free == 0:
        report = _coherence_in_basis(state, eigenbasis, kind, seed)
        return CorrelationReport(
            value=report.value,
            kind=kind,
            basis_a=eigenbasis,
            upper_bound=report.exactness is Exactness.UPPER_BOUND,
        )

    def objective(params: np.ndarray) -> float:
        basis = eigenbasis @ _cluster_rotation(params, clusters, state.n_a)
        return _coherence_in_basis(state, basis, kind, seed).value

    best_value, best_params = np.inf, np.zeros(free)
    for k in range(max(1, restarts)):
        start = np.zeros(free) if k == 0 else np.random.default_rng([seed, k]).normal(0.0, np.pi, free)
        value, params = _descend(objective, start)
        if value < best_value:
            best_value, best_params = value, params

    basis = _orthonormalize(eigenbasis @ _cluster_rotation(best_params, clusters, state.n_a))
    logger.debug(
        f"cc search over {len(clusters)} cluster(s), {free} parameter(s): best {best_value:.12f}"
    )
    return CorrelationReport(
        value=float(min(1.0, max(0.0, best_value))),
        kind=kind,
        basis_a=basis,
        upper_bound=True,
        restarts=max(1, restarts),
    )


def _schmidt_coefficients(psi: Sequence[complex], n_a: int, n_b: int) -> np.ndarray:
    return schmidt(psi, n_a, n_b).coefficients


def pure_cc(
    psi: Sequence[complex],
    n_a: int,
    n_b: int,
    kind: DistanceKind = DistanceKind.FIDELITY
) -> float:
    """
    Correlated coherence of a pure state from its Schmidt coefficients.

    Affinity gives 1 - sum_i lambda_i^2, fidelity gives 1 - max_i lambda_i.

    Raises:
        NotNormalized
    """
    lam = _schmidt_coefficients(psi, n_a, n_b)
    if DistanceKind(kind) is DistanceKind.AFFINITY:
        return float(max(0.0, 1.0 - np.sum(lam ** 2)))
    return float(max(0.0, 1.0 - np.max(lam)))


def pure_cc_witness(
    psi: Sequence[complex],
    n_a: int,
    n_b: int,
    kind: DistanceKind = DistanceKind.FIDELITY
) -> DensityMatrix:
    """
    Closest a-classical state to a pure state.

    Affinity: sum_i lambda_i^2 / sum_j lambda_j^2 |x_i y_i><x_i y_i|.
    Fidelity: |x_1 y_1><x_1 y_1| for the largest Schmidt coefficient.
    """
    form = schmidt(psi, n_a, n_b)
    products = [np.kron(form.basis_a[:, i], form.basis_b[:, i]) for i in range(form.coefficients.size)]
    if DistanceKind(kind) is DistanceKind.AFFINITY:
        weights = form.coefficients ** 2 / np.sum(form.coefficients ** 2)
    else:
        weights = np.zeros(form.coefficients.size)
        weights[int(np.argmax(form.coefficients))] = 1.0
    sigma = sum(w * np.outer(v, v.conj()) for w, v in zip(weights, products))
    return validate_density(sigma)


def discord_estimate(
    state: BipartiteState,
    kind: DistanceKind = DistanceKind.FIDELITY,
    restarts: int = DEFAULT_RESTARTS,
    seed: int = 0
) -> CorrelationReport:
    """
    Upper bound on the geometric discord: partial coherence minimised over all bases of a.

    The search pool starts from the best basis of correlated_coherence, so
    the estimate never exceeds it. Further starts are Haar-random unitaries,
    each refined by Nelder-Mead over U exp(iH).

    Args:
        state: Bipartite state
        kind: Distance kind
        restarts: Haar-seeded starts on top of the correlated-coherence basis
        seed: Start k draws from default_rng([seed, k])

    Returns:
        CorrelationReport flagged as an upper bound
    """
    n_a = state.n_a
    cc = correlated_coherence(state, kind, restarts, seed)
    best_value, best_basis = cc.value, cc.basis_a

    def refine(anchor: np.ndarray) -> Tuple[float, np.ndarray]:
        def objective(params: np.ndarray) -> float:
            basis = anchor @ expm(1j * kernels.hermitian_from_params(params, n_a))
            return _coherence_in_basis(state, basis, kind, seed).value

        value, params = _descend(objective, np.zeros(n_a * n_a))
        return value, _orthonormalize(anchor @ expm(1j * kernels.hermitian_from_params(params, n_a)))

    anchors = [cc.basis_a] + [
        haar_unitary(np.random.default_rng([seed, k]), n_a) for k in range(restarts)
    ]
    for anchor in anchors:
        value, basis = refine(anchor)
        if value < best_value:
            best_value, best_basis = value, basis

    logger.debug(f"discord estimate {best_value:.12f} (cc {cc.value:.12f})")
    return CorrelationReport(
        value=float(min(1.0, max(0.0, best_value))),
        kind=kind,
        basis_a=best_basis,
        upper_bound=True,
        restarts=restarts,
    )
