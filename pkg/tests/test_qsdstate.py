"""Tests for embedding discrimination tasks into bipartite states."""
import numpy as np
import pytest

from src.coherence.partial_coherence import affinity_partial_coherence
from src.models.data_models import DiscriminationMethod
from src.qsd.discrimination import helstrom, lsm_error
from src.qsdstate.embedding import build_qsd_state, discrimination_bound_check, qsd_state_roundtrip
from src.states.generators import random_ensemble
from src.states.structure import reduced_state
from src.states.validators import validate_ensemble

from .conftest import is_density, ket, projector


@pytest.mark.parametrize("members,dim", [(1, 2), (2, 2), (3, 2), (2, 4)])
def test_embedded_state_blocks(members, dim):
    ensemble = random_ensemble(members, dim, seed=members * 10 + dim)
    state = build_qsd_state(ensemble)
    assert (state.n_a, state.n_b) == (members, dim)
    assert is_density(state.matrix)
    for i, (eta, rho) in enumerate(zip(ensemble.priors, ensemble.states)):
        block = state.matrix[i * dim:(i + 1) * dim, i * dim:(i + 1) * dim]
        np.testing.assert_allclose(block, eta * rho, atol=1e-10)


def test_marginal_of_b_is_average_state():
    ensemble = random_ensemble(3, 3, seed=4)
    state = build_qsd_state(ensemble)
    average = sum(eta * rho for eta, rho in zip(ensemble.priors, ensemble.states))
    # tr_a picks up the diagonal blocks eta_i rho_i
    np.testing.assert_allclose(reduced_state(state, "b").matrix, average, atol=1e-10)


@pytest.mark.parametrize("seed", range(4))
def test_roundtrip(seed):
    ensemble = random_ensemble(2 + seed % 3, 3, seed=seed)
    report = qsd_state_roundtrip(ensemble)
    assert report.passed
    np.testing.assert_allclose(report.recovered_priors, report.priors, atol=1e-9)


def test_roundtrip_with_zero_prior():
    ensemble = validate_ensemble(
        [0.6, 0.0, 0.4], [projector(ket(1, 0)), np.eye(2) / 2, projector(ket(1, 1))]
    )
    report = qsd_state_roundtrip(ensemble)
    assert report.passed
    assert report.recovered_priors[1] == 0.0


def test_more_members_than_dimension():
    ensemble = random_ensemble(4, 2, seed=3)
    assert qsd_state_roundtrip(ensemble).passed


@pytest.mark.parametrize("seed", range(4))
def test_binary_independent_equality(seed):
    ensemble = random_ensemble(2, 2, seed=seed, ranks=[1, 1])
    check = discrimination_bound_check(ensemble)
    assert check.linearly_independent
    assert check.equality_holds
    assert check.bound_holds
    assert check.reference_method is DiscriminationMethod.HELSTROM_EXACT
    assert abs(check.reference_error - helstrom(ensemble).error_prob) < 1e-12


def test_zero_and_plus_benchmark():
    ensemble = validate_ensemble([0.5, 0.5], [projector(ket(1, 0)), projector(ket(1, 1))])
    check = discrimination_bound_check(ensemble)
    assert abs(check.fidelity_coherence - (1.0 - 1.0 / np.sqrt(2.0)) / 2.0) < 1e-9


def test_dependent_ensemble_has_no_equality_claim():
    ensemble = random_ensemble(2, 2, seed=1, ranks=[2, 2])
    check = discrimination_bound_check(ensemble)
    assert not check.linearly_independent
    assert check.equality_holds is None
    assert check.bound_holds


@pytest.mark.parametrize("seed", range(4))
def test_lsm_error_equals_affinity_coherence(seed):
    ensemble = random_ensemble(2 + seed % 3, 2 + seed % 2, seed=seed)
    value = affinity_partial_coherence(build_qsd_state(ensemble)).value
    assert abs(lsm_error(ensemble) - value) < 1e-8


def test_bound_check_reports_lsm_identity():
    check = discrimination_bound_check(random_ensemble(3, 3, seed=8), restarts=3)
    assert check.lsm_identity_holds
    assert check.lsm_identity_defect < 1e-8
    assert check.reference_method is DiscriminationMethod.VN_OPTIMIZED
