"""Tests for generalised and correlated coherence and the discord estimate."""
import numpy as np
import pytest

from src.correlations.correlated_coherence import (
    STALL_EVALS_PER_PARAM,
    _descend,
    correlated_coherence,
    discord_estimate,
    eigen_clusters,
    gcc,
    pure_cc,
    pure_cc_witness,
)
from src.metrics.distances import distance
from src.models.data_models import DistanceKind
from src.states.generators import random_bipartite, random_density, random_pure_state, random_unitary
from src.states.structure import classical_state, product_state, pure_density, reduced_state
from src.states.validators import validate_bipartite

from .conftest import ket

KINDS = [DistanceKind.FIDELITY, DistanceKind.AFFINITY]


def test_eigen_clusters():
    assert eigen_clusters(np.array([0.1, 0.2, 0.3])) == [[0], [1], [2]]
    assert eigen_clusters(np.array([0.25, 0.25, 0.5])) == [[0, 1], [2]]
    assert eigen_clusters(np.array([0.5, 0.5])) == [[0, 1]]


@pytest.mark.parametrize("kind", KINDS)
def test_pure_closed_forms_on_bell_and_product(kind):
    assert abs(pure_cc(ket(1, 0, 0, 1), 2, 2, kind) - 0.5) < 1e-12
    assert pure_cc(np.kron(ket(1, 1), ket(1, 2, 0)), 2, 3, kind) < 1e-12


@pytest.mark.parametrize("kind", KINDS)
@pytest.mark.parametrize("seed", range(3))
def test_pure_witness_reproduces_value(kind, seed):
    psi = random_pure_state(6, seed)
    witness = pure_cc_witness(psi, 2, 3, kind)
    assert abs(distance(pure_density(psi), witness, kind) - pure_cc(psi, 2, 3, kind)) < 1e-8


@pytest.mark.parametrize("kind", KINDS)
def test_gcc_of_bell_state(bell, kind):
    assert abs(gcc(bell, kind) - 0.5) < 1e-9


@pytest.mark.parametrize("kind", KINDS)
@pytest.mark.parametrize("seed", range(4))
def test_gcc_is_nonnegative(kind, seed):
    state = random_bipartite(2, 2 + seed % 2, seed)
    assert gcc(state, kind) >= -1e-7


def test_affinity_gcc_vanishes_on_products():
    state = product_state(random_density(2, seed=1), random_density(3, seed=2))
    assert abs(gcc(state, DistanceKind.AFFINITY)) < 1e-8


@pytest.mark.parametrize("kind", KINDS)
def test_classical_states_have_no_correlated_coherence(kind):
    basis = random_unitary(2, 3)
    state = classical_state([0.7, 0.3], basis, [random_density(2, seed=4), random_density(2, seed=5)])
    report = correlated_coherence(state, kind)
    assert report.value < 1e-9
    assert not report.upper_bound


@pytest.mark.parametrize("kind", KINDS)
@pytest.mark.parametrize("seed", range(3))
def test_pure_states_match_closed_form(kind, seed):
    psi = random_pure_state(6, seed)
    state = validate_bipartite(pure_density(psi), 2, 3)
    assert abs(correlated_coherence(state, kind).value - pure_cc(psi, 2, 3, kind)) < 1e-6


@pytest.mark.parametrize("kind", KINDS)
def test_degenerate_marginal_is_searched(bell, kind):
    report = correlated_coherence(bell, kind, restarts=2, seed=1)
    assert abs(report.value - 0.5) < 1e-6
    assert report.upper_bound
    assert report.restarts == 2


@pytest.mark.parametrize("kind", KINDS)
def test_local_unitary_invariance(kind):
    state = random_bipartite(2, 2, seed=6)
    local = np.kron(random_unitary(2, 7), random_unitary(2, 8))
    moved = validate_bipartite(local @ state.matrix @ local.conj().T, 2, 2)
    dev = abs(correlated_coherence(moved, kind).value - correlated_coherence(state, kind).value)
    assert dev < 1e-5


@pytest.mark.parametrize("kind", KINDS)
def test_discord_estimate_below_correlated_coherence(kind):
    state = random_bipartite(2, 2, seed=9)
    cc = correlated_coherence(state, kind, restarts=1, seed=3)
    disc = discord_estimate(state, kind, restarts=1, seed=3)
    assert disc.value <= cc.value + 1e-12
    assert disc.upper_bound
    basis = disc.basis_a
    np.testing.assert_allclose(basis.conj().T @ basis, np.eye(2), atol=1e-10)


def _purification_of_maximally_mixed(n_a: int, n_b: int, seed: int) -> np.ndarray:
    isometry = random_unitary(n_b, seed)[:, :n_a]
    psi = sum(np.kron(np.eye(n_a)[:, i], isometry[:, i]) for i in range(n_a)) / np.sqrt(n_a)
    return np.kron(random_unitary(n_a, seed + 100), np.eye(n_b)) @ psi


@pytest.mark.parametrize("kind,n_a,n_b", [
    (DistanceKind.FIDELITY, 2, 2),
    (DistanceKind.FIDELITY, 2, 3),
    (DistanceKind.AFFINITY, 2, 3),
    (DistanceKind.AFFINITY, 3, 3),
])
@pytest.mark.parametrize("seed", range(2))
def test_discord_equals_correlated_coherence_on_purifications(kind, n_a, n_b, seed):
    psi = _purification_of_maximally_mixed(n_a, n_b, seed)
    state = validate_bipartite(pure_density(psi), n_a, n_b)
    np.testing.assert_allclose(reduced_state(state, "a").matrix, np.eye(n_a) / n_a, atol=1e-10)
    cc = correlated_coherence(state, kind, restarts=2, seed=seed)
    disc = discord_estimate(state, kind, restarts=2, seed=seed)
    assert abs(cc.value - disc.value) <= 1e-5


def test_affinity_pure_cc_is_monotone_under_majorization():
    rng = np.random.default_rng(11)
    for _ in range(100):
        lam = np.sort(rng.dirichlet(np.ones(3)))[::-1]
        mix = rng.uniform()
        # mu = D lam with D doubly stochastic, so lam majorizes mu
        mu = mix * lam + (1.0 - mix) * lam[rng.permutation(3)]
        psi_lam = sum(np.sqrt(lam[i]) * np.kron(np.eye(3)[:, i], np.eye(4)[:, i]) for i in range(3))
        psi_mu = sum(np.sqrt(mu[i]) * np.kron(np.eye(3)[:, i], np.eye(4)[:, i]) for i in range(3))
        more_ordered = pure_cc(psi_lam, 3, 4, DistanceKind.AFFINITY)
        less_ordered = pure_cc(psi_mu, 3, 4, DistanceKind.AFFINITY)
        assert more_ordered <= less_ordered + 1e-12


@pytest.mark.parametrize("seed", range(3))
def test_fidelity_gcc_is_nonnegative_with_three_blocks(seed):
    state = random_bipartite(3, 2, seed + 20)
    assert gcc(state, DistanceKind.FIDELITY, restarts=5, seed=seed) >= -1e-7


def test_descent_stops_on_flat_objective():
    calls = []

    def flat(params):
        calls.append(1)
        return 0.25 + 1e-12 * np.sin(np.sum(params))

    value, params = _descend(flat, np.zeros(4))
    assert abs(value - 0.25) < 1e-11
    assert params.shape == (4,)
    assert len(calls) <= STALL_EVALS_PER_PARAM * 4 + 10
