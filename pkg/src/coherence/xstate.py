"""Closed-form fidelity partial coherence of (2, n) X states."""
import logging
from typing import List

import numpy as np

from ..linalg import kernels
from ..metrics.distances import distance
from ..models.data_models import (
    BipartiteState,
    CoherenceMethod,
    CoherenceReport,
    DistanceKind,
    Exactness,
)
from ..states.structure import from_local_frame, local_frame
from ..states.validators import validate_density
from ..utils.errors import NotInvertible, NotXPattern
from .partial_coherence import witness_from_projectors

logger = logging.getLogger("partial_coherence")

INVERTIBLE_TOL = 1e-10


def _local_matrix(state: BipartiteState) -> np.ndarray:
    # skip the basis change for the identity basis so exact zeros survive
    if np.array_equal(state.basis_a, np.eye(state.n_a)):
        return state.matrix
    return local_frame(state)


def x_pattern(dim: int) -> np.ndarray:
    """Boolean mask of the main diagonal and the anti-diagonal."""
    idx = np.arange(dim)
    return (idx[:, None] == idx[None, :]) | (idx[:, None] + idx[None, :] == dim - 1)


def is_xstate(state: BipartiteState) -> bool:
    if state.n_a != 2:
        return False
    m = _local_matrix(state)
    return bool(np.all(m[~x_pattern(state.dim)] == 0))


def _pairs(n: int) -> List[tuple]:
    return [(i, 2 * n - 1 - i) for i in range(n)]


def _positive_projector(m: np.ndarray, root: np.ndarray, n: int) -> np.ndarray:
    """
    Projector onto the positive eigenspace of Lambda = sqrt(rho) S sqrt(rho).

    S = diag(I_n, -I_n). Each anti-diagonal pair (i, j) spans a subspace left
    invariant by sqrt(rho), so Lambda's positive eigenvector for the pair is
    sqrt(rho) v with v the positive eigenvector of [[r_ii, r_ij], [-r_ji, -r_jj]].
    """
    dim = 2 * n
    projector = np.zeros((dim, dim), dtype=complex)
    for i, j in _pairs(n):
        a, d, y = np.real(m[i, i]), np.real(m[j, j]), m[i, j]
        disc = np.sqrt(max(0.0, (a + d) ** 2 - 4.0 * abs(y) ** 2))
        lam = 0.5 * (a - d + disc)
        if lam <= kernels.POSITIVE_TIE_TOL:
            continue
        # two eigenvector candidates from the two rows; keep the better conditioned one
        first = np.array([y, lam - a], dtype=complex)
        second = np.array([lam + d, -np.conj(y)], dtype=complex)
        v = first if np.linalg.norm(first) >= np.linalg.norm(second) else second
        full = np.zeros(dim, dtype=complex)
        full[i], full[j] = v
        u = root @ full
        norm = np.linalg.norm(u)
        if norm < kernels.POSITIVE_TIE_TOL:
            continue
        u /= norm
        projector += np.outer(u, u.conj())
    return projector


def xstate_fidelity_pc(state: BipartiteState, require_invertible: bool = False) -> CoherenceReport:
    """
    Fidelity partial coherence of a (2, n) X state in closed form.

    C^a_F = (1 - sum_i sqrt((r_ii + r_jj)^2 - 4 |r_ji|^2)) / 2 over the
    anti-diagonal pairs j = 2n - 1 - i. The formula also holds for singular
    X states; require_invertible only enforces a full-rank input.

    Args:
        state: X state with n_a = 2, nonzero entries on the diagonal and anti-diagonal only
        require_invertible: Reject states with smallest eigenvalue <= 1e-10

    Returns:
        Exact CoherenceReport with the closed-form optimal projectors in its cpis

    Raises:
        NotXPattern, NotInvertible
    """
    if state.n_a != 2:
        raise NotXPattern(f"X-state formula needs n_a = 2, got {state.n_a}")
    m = _local_matrix(state)
    outside = m[~x_pattern(state.dim)]
    if np.any(outside != 0):
        raise NotXPattern(f"{int(np.count_nonzero(outside))} entries off the X pattern are nonzero")
    if require_invertible:
        smallest = float(np.linalg.eigvalsh(m)[0])
        if smallest <= INVERTIBLE_TOL:
            raise NotInvertible(f"Smallest eigenvalue {smallest:.3e} is not above {INVERTIBLE_TOL:.0e}")

    n = state.n_b
    total = 0.0
    for i, j in _pairs(n):
        a, d = np.real(m[i, i]), np.real(m[j, j])
        total += np.sqrt(max(0.0, (a + d) ** 2 - 4.0 * abs(m[j, i]) ** 2))
    value = float(min(1.0, max(0.0, 0.5 * (1.0 - total))))

    root = kernels.psd_sqrt(m)
    plus = _positive_projector(m, root, n)
    projectors = [plus, np.eye(state.dim) - plus]
    witness = witness_from_projectors(root, projectors, [0, 1], 2, n)
    cpis = validate_density(from_local_frame(witness, state))
    logger.debug(f"X-state closed form {value:.12f}")

    return CoherenceReport(
        value=value,
        kind=DistanceKind.FIDELITY,
        cpis=cpis,
        method=CoherenceMethod.CLOSED_FORM_XSTATE,
        exactness=Exactness.EXACT,
        diagnostics={"cpis_distance": distance(state.state, cpis, DistanceKind.FIDELITY)},
    )
