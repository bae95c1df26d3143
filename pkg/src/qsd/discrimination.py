"""Minimum-error discrimination: POVM evaluation, Helstrom and least-square measurement."""
import logging
from typing import List, Tuple

import numpy as np

from ..linalg import kernels
from ..models.data_models import (
    DiscriminationMethod,
    DiscriminationResult,
    Ensemble,
    Povm,
)
from ..states.validators import validate_ensemble, validate_povm
from ..utils.errors import CountMismatch, DimensionMismatch, WrongMemberCount

logger = logging.getLogger("partial_coherence")

ZERO_PRIOR_TOL = 1e-12


def _clip_unit(value: float) -> float:
    return float(min(1.0, max(0.0, value)))


def success_probability(ensemble: Ensemble, povm: Povm) -> float:
    """
    sum_i eta_i tr(M_i rho_i) for a fixed measurement.

    Args:
        ensemble: States with priors
        povm: One effect per member, same dimension as the states

    Returns:
        Success probability in [0, 1]
    """
    if len(povm.effects) != len(ensemble):
        raise CountMismatch(f"{len(povm.effects)} effects for {len(ensemble)} members")
    if povm.effects[0].shape[0] != ensemble.dim:
        raise DimensionMismatch(
            f"Effects act on dimension {povm.effects[0].shape[0]}, states on {ensemble.dim}"
        )
    total = sum(
        eta * np.real(np.trace(m @ rho))
        for eta, m, rho in zip(ensemble.priors, povm.effects, ensemble.states)
    )
    return _clip_unit(float(total))


def drop_zero_priors(ensemble: Ensemble) -> Tuple[Ensemble, List[int]]:
    """
    Remove members whose prior is below 1e-12.

    Returns:
        Tuple of (reduced ensemble, original indices of the kept members)
    """
    kept = [i for i, eta in enumerate(ensemble.priors) if eta >= ZERO_PRIOR_TOL]
    if len(kept) == len(ensemble):
        return ensemble, kept
    logger.debug(f"Dropping {len(ensemble) - len(kept)} zero-prior member(s)")
    priors = ensemble.priors[kept]
    reduced = validate_ensemble(priors / priors.sum(), [ensemble.members[i].state for i in kept])
    return reduced, kept


def expand_measurement(effects: List[np.ndarray], kept: List[int], count: int) -> List[np.ndarray]:
    """Put effects back at their original indices, zero for dropped members."""
    dim = effects[0].shape[0]
    full = [np.zeros((dim, dim), dtype=complex) for _ in range(count)]
    for idx, effect in zip(kept, effects):
        full[idx] = effect
    return full


def build_result(
    ensemble: Ensemble,
    effects: List[np.ndarray],
    method: DiscriminationMethod,
    success: float,
    **certificate
) -> DiscriminationResult:
    success = _clip_unit(success)
    result = DiscriminationResult(
        success_prob=success,
        error_prob=1.0 - success,
        measurement=validate_povm(effects),
        method=method,
    )
    if certificate:
        result = result.model_copy(update={"certificate": result.certificate.model_copy(update=certificate)})
    return result


def helstrom(ensemble: Ensemble) -> DiscriminationResult:
    """
    Optimal two-state discrimination, P_S = (1 + ||eta_1 rho_1 - eta_2 rho_2||_1) / 2.

    The measurement is {Pi_+, I - Pi_+} with Pi_+ the projector onto the
    positive eigenspace of Lambda; zero modes go to the second outcome.

    Args:
        ensemble: Exactly two members

    Returns:
        DiscriminationResult with method HelstromExact
    """
    if len(ensemble) != 2:
        raise WrongMemberCount(f"Helstrom needs 2 members, got {len(ensemble)}")
    (eta_1, eta_2), (rho_1, rho_2) = ensemble.priors, ensemble.states
    lam = eta_1 * rho_1 - eta_2 * rho_2
    _, projector = kernels.positive_part(lam)
    success = 0.5 * (1.0 + kernels.trace_norm(lam))
    effects = [projector, np.eye(ensemble.dim) - projector]
    return build_result(ensemble, effects, DiscriminationMethod.HELSTROM_EXACT, success)


def lsm_povm(ensemble: Ensemble) -> Povm:
    """
    Least-square measurement M_i = eta_i rho_out^-1/2 rho_i rho_out^-1/2.

    rho_out = sum_i eta_i rho_i; the projector onto its kernel is added to
    the first effect so the effects resolve the identity.

    Args:
        ensemble: Any valid ensemble

    Returns:
        Povm with one effect per member
    """
    rho_out = sum(eta * rho for eta, rho in zip(ensemble.priors, ensemble.states))
    inv_root = kernels.psd_inv_sqrt(rho_out)
    complement = np.eye(ensemble.dim) - kernels.support_projector(rho_out)
    effects = [
        inv_root @ (eta * rho) @ inv_root
        for eta, rho in zip(ensemble.priors, ensemble.states)
    ]
    effects[0] = effects[0] + complement
    return validate_povm(effects)


def lsm_error(ensemble: Ensemble) -> float:
    """Error probability 1 - sum_i eta_i tr(M_i rho_i) of the least-square measurement."""
    return _clip_unit(1.0 - success_probability(ensemble, lsm_povm(ensemble)))


def lsm(ensemble: Ensemble) -> DiscriminationResult:
    povm = lsm_povm(ensemble)
    return build_result(ensemble, povm.effects, DiscriminationMethod.LSM, success_probability(ensemble, povm))


def evaluate(ensemble: Ensemble, povm: Povm) -> DiscriminationResult:
    return build_result(
        ensemble, povm.effects, DiscriminationMethod.EVALUATED, success_probability(ensemble, povm)
    )
