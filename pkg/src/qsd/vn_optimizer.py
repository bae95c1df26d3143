"""Best von Neumann measurement for three or more states by random-restart ascent.

For a fixed rank composition (r_1, ..., r_n) the projectors are
pi_i = U P_i U^dagger with P_i fixed diagonal blocks, and the search runs over
the unitary U along geodesics U <- exp(t X) U, X = sum_i [eta_i rho_i, pi_i].
"""
import itertools
import logging
from typing import Iterator, List, Optional, Sequence, Tuple

import numpy as np
from scipy.linalg import expm

from ..linalg import kernels
from ..models.data_models import DiscriminationMethod, DiscriminationResult, Ensemble
from ..states.generators import haar_unitary
from ..utils.errors import DimensionMismatch, WrongMemberCount
from .discrimination import build_result, drop_zero_priors, expand_measurement, helstrom, lsm_povm

logger = logging.getLogger("partial_coherence")

DEFAULT_RESTARTS = 20
ENUMERATION_DIM_CAP = 8
RANK_TOL = 1e-10
STALL_WINDOW = 50
STALL_TOL = 1e-10
GRADIENT_TOL = 1e-12
MAX_ITERATIONS = 2000
ARMIJO = 1e-4
MIN_STEP = 1e-14


def _member_ranks(ensemble: Ensemble) -> List[int]:
    ranks = []
    for rho in ensemble.states:
        values = np.linalg.eigvalsh(kernels.hermitian_part(rho))
        ranks.append(int(np.sum(values > RANK_TOL * max(1.0, float(values[-1])))))
    return ranks


def _bounded_compositions(total: int, bounds: Sequence[int]) -> Iterator[Tuple[int, ...]]:
    """All (r_1..r_n) with 0 <= r_i <= bounds[i] and sum r_i == total."""
    for combo in itertools.product(*(range(b + 1) for b in bounds)):
        if sum(combo) == total:
            yield combo


def _lsm_composition(ensemble: Ensemble, bounds: Sequence[int]) -> Tuple[int, ...]:
    """Ranks from the eigenspaces of the least-square effects above 1/2."""
    dim = ensemble.dim
    effects = lsm_povm(ensemble).effects
    ranks = [
        min(int(np.sum(np.linalg.eigvalsh(e) > 0.5)), b) for e, b in zip(effects, bounds)
    ]
    # fill or trim by effect trace until the ranks add up to the dimension
    traces = [float(np.real(np.trace(e))) for e in effects]
    order = sorted(range(len(ranks)), key=lambda i: -traces[i])
    while sum(ranks) < dim:
        for i in order:
            if sum(ranks) < dim and ranks[i] < bounds[i]:
                ranks[i] += 1
    for i in reversed(order):
        while sum(ranks) > dim and ranks[i] > 0:
            ranks[i] -= 1
    return tuple(ranks)


def rank_compositions(ensemble: Ensemble) -> List[Tuple[int, ...]]:
    """
    Rank compositions worth searching for a projective measurement.

    Some optimum always has rank(pi_i) <= rank(rho_i). When the member ranks
    add up to at most the dimension a single padded composition therefore
    suffices; otherwise all bounded compositions are listed up to dimension 8
    and a least-square-seeded one is used beyond that.
    """
    dim = ensemble.dim
    bounds = _member_ranks(ensemble)
    if sum(bounds) <= dim:
        ranks = list(bounds)
        ranks[int(np.argmax(ensemble.priors))] += dim - sum(bounds)
        return [tuple(ranks)]
    if dim <= ENUMERATION_DIM_CAP:
        return list(_bounded_compositions(dim, bounds))
    return [_lsm_composition(ensemble, bounds)]


def weighted_states(ensemble: Ensemble) -> List[np.ndarray]:
    return [eta * kernels.hermitian_part(rho) for eta, rho in zip(ensemble.priors, ensemble.states)]


def rank_blocks(composition: Sequence[int]) -> List[slice]:
    edges = np.concatenate([[0], np.cumsum(composition)]).astype(int)
    return [slice(edges[i], edges[i + 1]) for i in range(len(composition))]


def success_value(u: np.ndarray, weighted: List[np.ndarray], blocks: List[slice]) -> float:
    total = 0.0
    for a, sl in zip(weighted, blocks):
        cols = u[:, sl]
        total += float(np.real(np.trace(kernels.dagger(cols) @ a @ cols)))
    return total


def _projectors(u: np.ndarray, blocks: List[slice]) -> List[np.ndarray]:
    return [u[:, sl] @ kernels.dagger(u[:, sl]) for sl in blocks]


def ascend(
    start: np.ndarray,
    weighted: List[np.ndarray],
    composition: Sequence[int],
    max_iterations: int = MAX_ITERATIONS
) -> Tuple[np.ndarray, float, bool, int]:
    """
    Geodesic gradient ascent of sum_i tr(pi_i A_i) over the unitary group.

    Args:
        start: Initial unitary
        weighted: A_i = eta_i rho_i
        composition: Projector ranks
        max_iterations: Iteration cap

    Returns:
        Tuple of (unitary, value, converged, iterations)
    """
    blocks = rank_blocks(composition)
    u = start
    value = success_value(u, weighted, blocks)
    history = [value]
    step = 1.0

    for iteration in range(1, max_iterations + 1):
        projectors = _projectors(u, blocks)
        direction = sum(a @ p - p @ a for a, p in zip(weighted, projectors))
        slope = float(np.real(np.sum(np.abs(direction) ** 2)))
        if np.sqrt(slope) < GRADIENT_TOL:
            return u, value, True, iteration

        # Armijo backtracking from a doubled trial step
        step = min(step * 2.0, 10.0)
        while step > MIN_STEP:
            candidate = expm(step * direction) @ u
            candidate_value = success_value(candidate, weighted, blocks)
            if candidate_value >= value + ARMIJO * step * slope:
                break
            step *= 0.5
        else:
            return u, value, True, iteration

        u, value = candidate, candidate_value
        history.append(value)
        if len(history) > STALL_WINDOW and value - history[-1 - STALL_WINDOW] < STALL_TOL:
            return u, value, True, iteration

    return u, value, False, max_iterations


def optimal_vn(
    ensemble: Ensemble,
    joint_dim: Optional[int] = None,
    restarts: int = DEFAULT_RESTARTS,
    seed: int = 0
) -> DiscriminationResult:
    """
    Best projective measurement with one projector per member.

    Two members are solved exactly by the Helstrom measurement, which is
    projective. For more members every rank composition is searched with
    random-restart geodesic ascent; the result is a lower bound on the best
    von Neumann success probability.

    Args:
        ensemble: At least two members
        joint_dim: Dimension the members act on; checked against the ensemble
        restarts: Random starts per rank composition
        seed: Restart k of composition c draws from default_rng([seed, c, k])

    Returns:
        DiscriminationResult; method HelstromExact or VnOptimized
    """
    if len(ensemble) < 2:
        raise WrongMemberCount(f"Need at least 2 members, got {len(ensemble)}")
    if joint_dim is not None and joint_dim != ensemble.dim:
        raise DimensionMismatch(f"joint_dim {joint_dim} differs from state dimension {ensemble.dim}")

    reduced, kept = drop_zero_priors(ensemble)
    dim = reduced.dim

    if len(reduced) == 1:
        effects = expand_measurement([np.eye(dim, dtype=complex)], kept, len(ensemble))
        return build_result(ensemble, effects, DiscriminationMethod.HELSTROM_EXACT, 1.0)

    if len(reduced) == 2:
        exact = helstrom(reduced)
        effects = expand_measurement(exact.measurement.effects, kept, len(ensemble))
        return build_result(ensemble, effects, DiscriminationMethod.HELSTROM_EXACT, exact.success_prob)

    weighted = weighted_states(reduced)
    compositions = rank_compositions(reduced)

    best: Optional[Tuple[float, np.ndarray, Tuple[int, ...], int, bool, int]] = None
    for c_idx, composition in enumerate(compositions):
        for k in range(restarts):
            rng = np.random.default_rng([seed, c_idx, k])
            u, value, converged, iterations = ascend(haar_unitary(rng, dim), weighted, composition)
            if best is None or value > best[0]:
                best = (value, u, composition, k, converged, iterations)

    value, u, composition, best_restart, converged, iterations = best
    if not converged:
        logger.warning(f"vN ascent hit the iteration cap (value {value:.12f})")
    logger.debug(
        f"vN search: {len(compositions)} composition(s) x {restarts} restart(s), "
        f"best {value:.12f} at restart {best_restart}"
    )

    # re-orthonormalize before building projectors
    q, r = np.linalg.qr(u)
    u = q * (np.diagonal(r) / np.abs(np.diagonal(r)))
    effects = expand_measurement(_projectors(u, rank_blocks(composition)), kept, len(ensemble))
    return build_result(
        ensemble,
        effects,
        DiscriminationMethod.VN_OPTIMIZED,
        value,
        restarts=restarts,
        best_restart=best_restart,
        converged=converged,
        iterations=iterations,
        composition=tuple(int(r) for r in composition),
        compositions_searched=len(compositions),
    )
