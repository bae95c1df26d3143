"""Embedding of a discrimination task into a single bipartite state and its checks."""
import logging

import numpy as np

from ..coherence.partial_coherence import (
    affinity_partial_coherence,
    fidelity_partial_coherence,
    qsd_task,
)
from ..linalg import kernels
from ..models.data_models import (
    BipartiteState,
    BoundCheckReport,
    DiscriminationMethod,
    Ensemble,
    RoundtripReport,
)
from ..qsd.discrimination import drop_zero_priors, helstrom, lsm_error
from ..qsd.vn_optimizer import DEFAULT_RESTARTS, optimal_vn
from ..states.structure import is_linearly_independent
from ..states.validators import validate_bipartite

logger = logging.getLogger("partial_coherence")

PRIOR_TOL = 1e-9
SPECTRAL_TOL = 1e-8
BOUND_SLACK = 1e-8
EQUALITY_TOL = 1e-7
LSM_IDENTITY_TOL = 1e-8


def build_qsd_state(ensemble: Ensemble) -> BipartiteState:
    """
    Block state with (i, j) block sqrt(eta_i rho_i) sqrt(eta_j rho_j).

    Built as A^dagger A with A = (sqrt(eta_1 rho_1), ..., sqrt(eta_n rho_n)),
    so it is positive by construction and has trace sum_i eta_i = 1.
    Zero-prior members keep their (zero) blocks.

    Args:
        ensemble: n members of dimension m

    Returns:
        BipartiteState with n_a = n, n_b = m and the computational basis
    """
    roots = [kernels.psd_sqrt(eta * rho) for eta, rho in zip(ensemble.priors, ensemble.states)]
    a = np.hstack(roots)
    return validate_bipartite(kernels.dagger(a) @ a, len(ensemble), ensemble.dim)


def _descending(values: np.ndarray, size: int) -> np.ndarray:
    padded = np.zeros(max(size, values.size))
    padded[:values.size] = np.sort(values)[::-1]
    return padded


def qsd_state_roundtrip(ensemble: Ensemble) -> RoundtripReport:
    """
    Embed the ensemble and read the discrimination task back out.

    The recovered priors must match eta_i and each recovered omega_i must be
    unitarily equivalent to rho_i; equivalence is checked on sorted spectra.

    Args:
        ensemble: Valid ensemble

    Returns:
        RoundtripReport with the largest prior and spectral deviations
    """
    state = build_qsd_state(ensemble)
    _, labels, task = qsd_task(state)

    # qsd_task renormalises, which is a no-op here since the eta_i already sum to one
    recovered = [0.0] * len(ensemble)
    spectral_defect = 0.0
    for label, eta, omega in zip(labels, task.priors, task.states):
        recovered[label] = float(eta)
        size = omega.shape[0]
        lhs = _descending(np.linalg.eigvalsh(omega), size)
        rhs = _descending(np.linalg.eigvalsh(ensemble.states[label]), size)
        spectral_defect = max(spectral_defect, float(np.max(np.abs(lhs - rhs))))

    kept = [i for i in range(len(ensemble)) if i in labels]
    prior_defect = max(
        (abs(recovered[i] - float(ensemble.priors[i])) for i in kept), default=0.0
    )
    passed = prior_defect <= PRIOR_TOL and spectral_defect <= SPECTRAL_TOL
    if not passed:
        logger.warning(
            f"Round trip off: prior defect {prior_defect:.3e}, spectral defect {spectral_defect:.3e}"
        )
    return RoundtripReport(
        priors=[float(p) for p in ensemble.priors],
        recovered_priors=recovered,
        prior_defect=prior_defect,
        spectral_defect=spectral_defect,
        passed=passed,
    )


def discrimination_bound_check(
    ensemble: Ensemble,
    restarts: int = DEFAULT_RESTARTS,
    seed: int = 0
) -> BoundCheckReport:
    """
    Compare the partial coherence of the embedded state with discrimination errors.

    The fidelity partial coherence bounds the minimum error from above, with
    equality for linearly independent ensembles; the affinity partial
    coherence equals the least-square measurement error exactly.

    Args:
        ensemble: Valid ensemble
        restarts: Restarts for the vN optimizer when more than two members survive
        seed: Optimizer seed

    Returns:
        BoundCheckReport
    """
    state = build_qsd_state(ensemble)
    fid = fidelity_partial_coherence(state, restarts, seed)
    aff = affinity_partial_coherence(state)

    reduced, _ = drop_zero_priors(ensemble)
    if len(reduced) == 1:
        reference, method = 0.0, DiscriminationMethod.HELSTROM_EXACT
    elif len(reduced) == 2:
        result = helstrom(reduced)
        reference, method = result.error_prob, result.method
    else:
        result = optimal_vn(reduced, restarts=restarts, seed=seed)
        reference, method = result.error_prob, result.method

    independent = is_linearly_independent(reduced)
    equality = abs(fid.value - reference) <= EQUALITY_TOL if independent else None

    lsm_value = lsm_error(ensemble)
    defect = abs(lsm_value - aff.value)
    return BoundCheckReport(
        fidelity_coherence=fid.value,
        reference_error=reference,
        reference_method=method,
        bound_holds=fid.value >= reference - BOUND_SLACK,
        linearly_independent=independent,
        equality_holds=equality,
        lsm_error=lsm_value,
        affinity_coherence=aff.value,
        lsm_identity_defect=defect,
        lsm_identity_holds=defect <= LSM_IDENTITY_TOL,
    )
