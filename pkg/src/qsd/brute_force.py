"""Brute-force projective-measurement scans used as reference values.

These scan random unitaries for a fixed rank composition and refine the best
few samples. They share nothing with the geodesic optimizer except the
objective, so they can referee it.
"""
import logging
from typing import List, Literal, Optional, Sequence, Tuple

import numpy as np
from scipy.linalg import expm
from scipy.optimize import minimize

from ..linalg import kernels
from ..models.data_models import Ensemble
from ..states.generators import haar_unitaries
from .vn_optimizer import ascend, rank_blocks, success_value, weighted_states

logger = logging.getLogger("partial_coherence")

NM_ITERATIONS_PER_PARAM = 400
NM_OPTIONS = {"xatol": 1e-9, "fatol": 1e-12}

Refinement = Literal["nelder-mead", "ascent"]


def _batch_success(unitaries: np.ndarray, weighted: List[np.ndarray], blocks: List[slice]) -> np.ndarray:
    """success_value for a stack of unitaries, shape (count, dim, dim)."""
    total = np.zeros(unitaries.shape[0])
    for a, sl in zip(weighted, blocks):
        cols = unitaries[:, :, sl]
        total += np.real(np.einsum("kji,jl,kli->k", cols.conj(), a, cols))
    return total


def scan_composition(
    ensemble: Ensemble,
    composition: Sequence[int],
    samples: int,
    seed: int = 0,
    keep: int = 3,
    refine: Refinement = "nelder-mead"
) -> float:
    """
    Best success probability found for projectors of the given ranks.

    Args:
        ensemble: States with priors
        composition: Rank of each projector, summing to the dimension
        samples: Number of Haar-random unitaries to scan
        seed: Samples are drawn in one batch from default_rng(seed)
        keep: How many of the best samples to refine
        refine: Nelder-Mead over U exp(iH) or geodesic ascent

    Returns:
        Best success probability found
    """
    dim = ensemble.dim
    weighted = weighted_states(ensemble)
    blocks = rank_blocks(composition)

    unitaries = haar_unitaries(np.random.default_rng(seed), dim, samples)
    values = _batch_success(unitaries, weighted, blocks)
    order = np.argsort(-values, kind="stable")
    scored: List[Tuple[float, np.ndarray]] = [(float(values[k]), unitaries[k]) for k in order]

    best = scored[0][0]
    for _, anchor in scored[:keep]:
        if refine == "ascent":
            _, value, _, _ = ascend(anchor, weighted, composition)
        else:
            def loss(params: np.ndarray, anchor: np.ndarray = anchor) -> float:
                rotation = expm(1j * kernels.hermitian_from_params(params, dim))
                return -success_value(anchor @ rotation, weighted, blocks)

            result = minimize(
                loss,
                np.zeros(dim * dim),
                method="Nelder-Mead",
                options=dict(NM_OPTIONS, maxiter=NM_ITERATIONS_PER_PARAM * dim * dim),
            )
            value = -float(result.fun)
        best = max(best, value)
    return float(best)


def scan_two_outcome(
    ensemble: Ensemble,
    samples: int,
    seed: int = 0,
    keep: int = 3,
    refine: Refinement = "nelder-mead"
) -> float:
    """Best two-outcome projective success probability over every rank split."""
    dim = ensemble.dim
    best: Optional[float] = None
    for rank in range(dim + 1):
        value = scan_composition(ensemble, (rank, dim - rank), samples, seed, keep, refine)
        best = value if best is None else max(best, value)
    return float(best)
