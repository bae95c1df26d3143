"""Channel application, subselection and the strong-contractibility slack."""
import logging
from typing import List, Literal, Optional, Tuple

import numpy as np

from ..linalg import kernels
from ..models.data_models import DensityMatrix, Diagnostics, DistanceKind, KrausChannel
from ..states.validators import ensure_density, validate_density
from ..utils.errors import DimensionMismatch, NumericalFailure
from .distances import StateLike, distance

logger = logging.getLogger("partial_coherence")

NULL_BRANCH_TOL = 1e-12
MAX_EXCLUDED_MASS = 1e-10

Branch = Tuple[float, Optional[DensityMatrix]]
WeightSource = Literal["rho", "sigma"]


def _check_dims(rho: DensityMatrix, channel: KrausChannel) -> None:
    if channel.dim_in != rho.dim:
        raise DimensionMismatch(
            f"Channel acts on dimension {channel.dim_in}, state has dimension {rho.dim}"
        )


def apply_channel(rho: StateLike, channel: KrausChannel) -> DensityMatrix:
    """
    Phi(rho) = sum_n K_n rho K_n^dagger.

    Args:
        rho: Input state
        channel: Kraus channel with matching input dimension

    Returns:
        Output state
    """
    state = ensure_density(rho)
    _check_dims(state, channel)
    out = sum(k @ state.matrix @ kernels.dagger(k) for k in channel.operators)
    return validate_density(out)


def branch_operators(rho: StateLike, channel: KrausChannel) -> List[np.ndarray]:
    """Unnormalised outputs K_n rho K_n^dagger, one per Kraus operator."""
    state = ensure_density(rho)
    _check_dims(state, channel)
    return [k @ state.matrix @ kernels.dagger(k) for k in channel.operators]


def subselect(rho: StateLike, channel: KrausChannel) -> List[Branch]:
    """
    Split a channel output into its post-measurement branches.

    Branches with probability below 1e-12 come back as (p, None).

    Args:
        rho: Input state
        channel: Kraus channel

    Returns:
        List of (p_n, rho_n) with rho_n = K_n rho K_n^dagger / p_n
    """
    branches: List[Branch] = []
    for out in branch_operators(rho, channel):
        p = float(np.real(np.trace(out)))
        if p < NULL_BRANCH_TOL:
            branches.append((max(p, 0.0), None))
        else:
            branches.append((p, validate_density(out / p)))
    return branches


def subselection_average(
    rho: StateLike,
    sigma: StateLike,
    channel: KrausChannel,
    kind: DistanceKind = DistanceKind.FIDELITY,
    weights: WeightSource = "rho",
    diagnostics: Optional[Diagnostics] = None
) -> float:
    """
    sum_n w_n d_X(rho_n, sigma_n) over the subselected branches.

    Branches where either state vanishes are skipped.

    Args:
        rho: First state
        sigma: Second state
        channel: Kraus channel used for subselection
        kind: Distance kind
        weights: Take w_n from rho's branches ("rho") or sigma's ("sigma")
        diagnostics: Optional collector for clamp overshoots

    Returns:
        Weighted average distance after subselection
    """
    rho_branches = subselect(rho, channel)
    sigma_branches = subselect(sigma, channel)
    if len(rho_branches) != len(sigma_branches):
        raise DimensionMismatch("Branch counts differ")

    own = rho_branches if weights == "rho" else sigma_branches
    excluded = sum(p for p, state in own if state is None)
    if excluded > MAX_EXCLUDED_MASS:
        raise NumericalFailure(f"Null branches carry probability {excluded:.3e}")

    total = 0.0
    for (p, rho_n), (q, sigma_n) in zip(rho_branches, sigma_branches):
        if rho_n is None or sigma_n is None:
            logger.debug(f"Skipping branch with weights p={p:.3e}, q={q:.3e}")
            continue
        w = p if weights == "rho" else q
        total += w * distance(rho_n, sigma_n, kind, diagnostics)
    return total


def contractibility_slack(
    rho: StateLike,
    sigma: StateLike,
    channel: KrausChannel,
    kind: DistanceKind = DistanceKind.FIDELITY,
    weights: WeightSource = "rho",
    diagnostics: Optional[Diagnostics] = None
) -> float:
    """
    d_X(rho, sigma) - sum_n p_n d_X(rho_n, sigma_n).

    Strong contractibility of d_X means this never drops below rounding noise.

    Args:
        rho: First state
        sigma: Second state
        channel: Kraus channel used for subselection
        kind: Distance kind
        weights: Branch weights from rho (default) or sigma
        diagnostics: Optional collector for clamp overshoots

    Returns:
        Slack; nonnegative up to about 1e-8 for a correct distance
    """
    before = distance(rho, sigma, kind, diagnostics)
    after = subselection_average(rho, sigma, channel, kind, weights, diagnostics)
    return before - after
