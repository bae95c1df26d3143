"""Seeded random generators for states, unitaries and channels."""
from typing import List, Optional, Sequence

import numpy as np

from ..linalg import kernels
from ..models.data_models import BipartiteState, DensityMatrix, Ensemble, KrausChannel
from ..utils.errors import BadRank
from .structure import partial_incoherent_state
from .validators import (
    validate_bipartite,
    validate_channel,
    validate_density,
    validate_ensemble,
)

XSTATE_MIN_EIGENVALUE = 1e-6


def _rng(seed) -> np.random.Generator:
    return np.random.default_rng(seed)


def _ginibre(rng: np.random.Generator, rows: int, cols: int) -> np.ndarray:
    return rng.standard_normal((rows, cols)) + 1j * rng.standard_normal((rows, cols))


def random_density(dim: int, rank: Optional[int] = None, seed=None) -> DensityMatrix:
    """
    Random density matrix G G^dagger / tr(G G^dagger) with G of shape (dim, rank).

    Args:
        dim: Hilbert-space dimension
        rank: Rank of the result; full rank if None
        seed: Anything numpy.random.default_rng accepts

    Returns:
        DensityMatrix
    """
    rank = dim if rank is None else rank
    if not 1 <= rank <= dim:
        raise BadRank(f"rank {rank} is outside 1..{dim}")
    g = _ginibre(_rng(seed), dim, rank)
    m = g @ kernels.dagger(g)
    return validate_density(m / np.real(np.trace(m)))


def haar_unitary(rng: np.random.Generator, dim: int) -> np.ndarray:
    """Haar unitary from the QR decomposition of a Ginibre matrix."""
    q, r = np.linalg.qr(_ginibre(rng, dim, dim))
    phases = np.diagonal(r) / np.abs(np.diagonal(r))
    return q * phases


def haar_unitaries(rng: np.random.Generator, dim: int, count: int) -> np.ndarray:
    """Stack of count Haar unitaries, shape (count, dim, dim)."""
    g = rng.standard_normal((count, dim, dim)) + 1j * rng.standard_normal((count, dim, dim))
    q, r = np.linalg.qr(g)
    diag = np.diagonal(r, axis1=1, axis2=2)
    return q * (diag / np.abs(diag))[:, None, :]


def random_unitary(dim: int, seed=None) -> np.ndarray:
    return haar_unitary(_rng(seed), dim)


def random_pure_state(dim: int, seed=None) -> np.ndarray:
    return random_unitary(dim, seed)[:, 0]


def random_channel(dim: int, kraus_count: int, seed=None) -> KrausChannel:
    """
    Random channel whose Kraus operators are slices of a Haar isometry.

    Args:
        dim: Input and output dimension
        kraus_count: Number of Kraus operators
        seed: RNG seed

    Returns:
        KrausChannel
    """
    if kraus_count < 1:
        raise BadRank("kraus_count must be at least 1")
    u = random_unitary(dim * kraus_count, seed)
    isometry = u[:, :dim]
    ops = [isometry[n * dim:(n + 1) * dim, :] for n in range(kraus_count)]
    return validate_channel(ops)


def random_partial_incoherent_channel(
    n_a: int,
    n_b: int,
    kraus_count: int,
    seed=None
) -> KrausChannel:
    """
    Random channel with Kraus operators K_n = sum_i |pi_n(i)><i| (x) B_{n,i}.

    K_0 uses a permutation; the other K_n use arbitrary index maps where only
    one input per output index carries a nonzero B. For each input i the
    nonzero B_{n,i} form a Kraus set on party b, which gives completeness and
    maps partial-incoherent states to partial-incoherent states.

    Args:
        n_a: Dimension of party a
        n_b: Dimension of party b
        kraus_count: Number of Kraus operators
        seed: RNG seed

    Returns:
        KrausChannel on the joint space
    """
    if kraus_count < 1:
        raise BadRank("kraus_count must be at least 1")
    rng = _rng(seed)

    # active[n][i] is the output index of input i under K_n, or None
    active: List[List[Optional[int]]] = []
    for n in range(kraus_count):
        if n == 0:
            targets = list(rng.permutation(n_a))
        else:
            targets = [None] * n_a
            taken = set()
            for i in rng.permutation(n_a):
                j = int(rng.integers(n_a))
                if j not in taken:
                    targets[i] = j
                    taken.add(j)
        active.append([None if t is None else int(t) for t in targets])

    ops = [np.zeros((n_a * n_b, n_a * n_b), dtype=complex) for _ in range(kraus_count)]
    for i in range(n_a):
        users = [n for n in range(kraus_count) if active[n][i] is not None]
        local = random_channel(n_b, len(users), int(rng.integers(2**32)))
        for n, b_op in zip(users, local.operators):
            ket_bra = np.zeros((n_a, n_a), dtype=complex)
            ket_bra[active[n][i], i] = 1.0
            ops[n] += np.kron(ket_bra, b_op)
    return validate_channel(ops)


def random_local_channel_b(n_a: int, n_b: int, kraus_count: int, seed=None) -> KrausChannel:
    """I_a (x) Phi_b for a random channel Phi_b."""
    local = random_channel(n_b, kraus_count, seed)
    return validate_channel([np.kron(np.eye(n_a), k) for k in local.operators])


def luders_channel(state: BipartiteState) -> KrausChannel:
    """Kraus form {|i><i| (x) I} of the Lueders measurement in the state's basis."""
    ops = []
    for i in range(state.n_a):
        alpha = state.basis_a[:, i]
        ops.append(np.kron(np.outer(alpha, alpha.conj()), np.eye(state.n_b)))
    return validate_channel(ops)


def random_xstate(n: int, seed=None, full_rank: bool = False) -> BipartiteState:
    """
    Random (2, n) X state: weight only on the diagonal and anti-diagonal.

    Args:
        n: Dimension of party b; the state is 2n x 2n
        seed: RNG seed
        full_rank: Resample until the smallest eigenvalue is at least 1e-6

    Returns:
        BipartiteState with n_a = 2, n_b = n
    """
    rng = _rng(seed)
    dim = 2 * n
    while True:
        diag = rng.random(dim) + 0.05
        diag /= diag.sum()
        m = np.diag(diag).astype(complex)
        for i in range(n):
            j = dim - 1 - i
            radius = rng.random() * np.sqrt(diag[i] * diag[j])
            m[j, i] = radius * np.exp(2j * np.pi * rng.random())
            m[i, j] = np.conj(m[j, i])
        if not full_rank or np.linalg.eigvalsh(m)[0] >= XSTATE_MIN_EIGENVALUE:
            return validate_bipartite(m, 2, n)


def random_bipartite(n_a: int, n_b: int, seed=None, rank: Optional[int] = None) -> BipartiteState:
    return validate_bipartite(random_density(n_a * n_b, rank, seed), n_a, n_b)


def random_pure_bipartite(n_a: int, n_b: int, seed=None) -> BipartiteState:
    psi = random_pure_state(n_a * n_b, seed)
    return validate_bipartite(np.outer(psi, psi.conj()), n_a, n_b)


def random_partial_incoherent_state(n_a: int, n_b: int, seed=None) -> BipartiteState:
    """sum_i p_i |i><i| (x) sigma_i with random weights and random-rank sigma_i."""
    rng = _rng(seed)
    probs = rng.dirichlet(np.ones(n_a))
    sigmas = [
        random_density(n_b, int(rng.integers(1, n_b + 1)), int(rng.integers(2**32)))
        for _ in range(n_a)
    ]
    return partial_incoherent_state(probs, sigmas)


def random_ensemble(
    members: int,
    dim: int,
    seed=None,
    ranks: Optional[Sequence[int]] = None,
    priors: Optional[Sequence[float]] = None
) -> Ensemble:
    """
    Random ensemble with Dirichlet priors and random-rank members.

    Args:
        members: Number of states
        dim: Dimension of each state
        seed: RNG seed
        ranks: Rank per member; drawn uniformly from 1..dim if None
        priors: Fixed priors; Dirichlet(1, ..., 1) if None

    Returns:
        Ensemble
    """
    rng = _rng(seed)
    if ranks is None:
        ranks = [int(rng.integers(1, dim + 1)) for _ in range(members)]
    weights = rng.dirichlet(np.ones(members)) if priors is None else np.asarray(priors, dtype=float)
    weights = weights / weights.sum()
    states = [random_density(dim, r, int(rng.integers(2**32))) for r in ranks]
    return validate_ensemble(weights, states)
