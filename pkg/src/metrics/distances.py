"""Fidelity, affinity and the distances d_X = 1 - X^2 built from them."""
import logging
from typing import Optional, Union

import numpy as np

from ..linalg import kernels
from ..models.data_models import DensityMatrix, Diagnostics, DistanceKind
from ..states.validators import ensure_density
from ..utils.errors import DimensionMismatch

logger = logging.getLogger("partial_coherence")

StateLike = Union[DensityMatrix, np.ndarray]


def _pair(rho: StateLike, sigma: StateLike):
    a = ensure_density(rho)
    b = ensure_density(sigma)
    if a.dim != b.dim:
        raise DimensionMismatch(f"Cannot compare states of size {a.dim} and {b.dim}")
    return a.matrix, b.matrix


def _clamp(value: float, name: str, diagnostics: Optional[Diagnostics]) -> float:
    overshoot = max(value - 1.0, -value, 0.0)
    if overshoot > 0.0:
        logger.debug(f"{name} clamped into [0, 1], overshoot {overshoot:.3e}")
        if diagnostics is not None:
            diagnostics.record(f"{name}_clamp_overshoot", overshoot)
    return float(min(1.0, max(0.0, value)))


def operator_fidelity(p: np.ndarray, q: np.ndarray) -> float:
    """||sqrt(P) sqrt(Q)||_1 for PSD operators of any trace."""
    p = kernels.require_square(p)
    q = kernels.require_square(q)
    if p.shape != q.shape:
        raise DimensionMismatch(f"Cannot compare operators of shapes {p.shape} and {q.shape}")
    return kernels.trace_norm(kernels.psd_sqrt(p) @ kernels.psd_sqrt(q))


def operator_affinity(p: np.ndarray, q: np.ndarray) -> float:
    """tr(sqrt(P) sqrt(Q)) for PSD operators of any trace."""
    p = kernels.require_square(p)
    q = kernels.require_square(q)
    if p.shape != q.shape:
        raise DimensionMismatch(f"Cannot compare operators of shapes {p.shape} and {q.shape}")
    return float(np.real(np.trace(kernels.psd_sqrt(p) @ kernels.psd_sqrt(q))))


def fidelity(rho: StateLike, sigma: StateLike, diagnostics: Optional[Diagnostics] = None) -> float:
    """
    Fidelity F = ||sqrt(rho) sqrt(sigma)||_1, clamped into [0, 1].

    Args:
        rho: First state
        sigma: Second state
        diagnostics: Optional collector for the pre-clamp overshoot

    Returns:
        Fidelity (not squared)
    """
    a, b = _pair(rho, sigma)
    return _clamp(operator_fidelity(a, b), "fidelity", diagnostics)


def fidelity_nested(rho: StateLike, sigma: StateLike) -> float:
    """tr sqrt(sqrt(sigma) rho sqrt(sigma)); same value as fidelity, two roots deeper."""
    a, b = _pair(rho, sigma)
    root_b = kernels.psd_sqrt(b)
    inner = kernels.clip_psd(root_b @ a @ root_b)
    value = float(np.sum(np.sqrt(np.clip(np.linalg.eigvalsh(inner), 0.0, None))))
    return _clamp(value, "fidelity", None)


def affinity(rho: StateLike, sigma: StateLike, diagnostics: Optional[Diagnostics] = None) -> float:
    """
    Affinity A = tr(sqrt(rho) sqrt(sigma)), clamped into [0, 1].

    Args:
        rho: First state
        sigma: Second state
        diagnostics: Optional collector for the pre-clamp overshoot

    Returns:
        Affinity
    """
    a, b = _pair(rho, sigma)
    return _clamp(operator_affinity(a, b), "affinity", diagnostics)


def overlap(
    rho: StateLike,
    sigma: StateLike,
    kind: DistanceKind,
    diagnostics: Optional[Diagnostics] = None
) -> float:
    kind = DistanceKind(kind)
    if kind is DistanceKind.FIDELITY:
        return fidelity(rho, sigma, diagnostics)
    return affinity(rho, sigma, diagnostics)


def operator_overlap(p: np.ndarray, q: np.ndarray, kind: DistanceKind) -> float:
    if DistanceKind(kind) is DistanceKind.FIDELITY:
        return operator_fidelity(p, q)
    return operator_affinity(p, q)


def distance(
    rho: StateLike,
    sigma: StateLike,
    kind: DistanceKind = DistanceKind.FIDELITY,
    diagnostics: Optional[Diagnostics] = None
) -> float:
    """
    d_X(rho, sigma) = 1 - X(rho, sigma)^2.

    Args:
        rho: First state
        sigma: Second state
        kind: FIDELITY or AFFINITY
        diagnostics: Optional collector for clamp overshoots

    Returns:
        Distance in [0, 1]
    """
    x = overlap(rho, sigma, kind, diagnostics)
    return 1.0 - x * x
