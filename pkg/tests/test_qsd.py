"""Tests for minimum-error discrimination and the von Neumann optimizer."""
import numpy as np
import pytest

from src.models.data_models import DiscriminationMethod
from src.qsd.brute_force import _batch_success, scan_composition, scan_two_outcome
from src.qsd.discrimination import (
    evaluate,
    helstrom,
    lsm,
    lsm_error,
    lsm_povm,
    success_probability,
)
from src.qsd.vn_optimizer import optimal_vn, rank_blocks, rank_compositions, success_value, weighted_states
from src.states.generators import haar_unitaries, random_density, random_ensemble
from src.states.validators import validate_ensemble, validate_povm
from src.utils.errors import CountMismatch, DimensionMismatch, WrongMemberCount

from .conftest import ket, projector


def _pure_pair(eta: float, angle: float):
    psi, phi = ket(1, 0), ket(np.cos(angle), np.sin(angle))
    return validate_ensemble([eta, 1.0 - eta], [projector(psi), projector(phi)]), abs(np.cos(angle))


@pytest.mark.parametrize("eta", [0.5, 0.3])
@pytest.mark.parametrize("angle", [0.3, np.pi / 4, 1.2])
def test_helstrom_pure_states(eta, angle):
    ensemble, overlap = _pure_pair(eta, angle)
    expected = 0.5 * (1.0 + np.sqrt(1.0 - 4.0 * eta * (1.0 - eta) * overlap ** 2))
    result = helstrom(ensemble)
    assert abs(result.success_prob - expected) < 1e-10
    assert abs(result.error_prob - (1.0 - expected)) < 1e-10
    assert result.method is DiscriminationMethod.HELSTROM_EXACT
    assert result.measurement.is_projective


def test_helstrom_needs_two_members():
    with pytest.raises(WrongMemberCount):
        helstrom(random_ensemble(3, 2, seed=0))


def test_success_probability_checks_measurement():
    ensemble = random_ensemble(2, 2, seed=1)
    with pytest.raises(CountMismatch):
        success_probability(ensemble, validate_povm([np.eye(2)]))
    with pytest.raises(DimensionMismatch):
        success_probability(ensemble, validate_povm([np.eye(3), np.zeros((3, 3))]))


def test_trivial_measurement_scores_first_prior():
    ensemble = random_ensemble(3, 2, seed=2)
    povm = validate_povm([np.eye(2), np.zeros((2, 2)), np.zeros((2, 2))])
    assert abs(evaluate(ensemble, povm).success_prob - ensemble.priors[0]) < 1e-12


@pytest.mark.parametrize("seed", range(3))
def test_lsm_is_a_valid_povm(seed):
    ensemble = random_ensemble(3, 3, seed=seed, ranks=[1, 1, 1])
    povm = lsm_povm(ensemble)
    np.testing.assert_allclose(sum(povm.effects), np.eye(3), atol=1e-9)
    assert lsm(ensemble).method is DiscriminationMethod.LSM


def test_lsm_on_orthogonal_states_is_perfect():
    ensemble = validate_ensemble(
        [0.2, 0.3, 0.5], [projector(ket(1, 0, 0)), projector(ket(0, 1, 0)), projector(ket(0, 0, 1))]
    )
    assert lsm_error(ensemble) < 1e-10


@pytest.mark.parametrize("count", [2, 3, 4])
def test_lsm_on_identical_states_is_a_guess(count):
    rho = random_density(3, seed=count).matrix
    ensemble = validate_ensemble([1.0 / count] * count, [rho] * count)
    assert abs(lsm_error(ensemble) - (1.0 - 1.0 / count)) < 1e-10


@pytest.mark.parametrize("seed", range(3))
def test_lsm_never_beats_helstrom(seed):
    ensemble = random_ensemble(2, 3, seed=seed)
    assert lsm(ensemble).success_prob <= helstrom(ensemble).success_prob + 1e-10


def test_optimal_vn_two_members_is_helstrom():
    ensemble = random_ensemble(2, 3, seed=4)
    result = optimal_vn(ensemble)
    assert result.method is DiscriminationMethod.HELSTROM_EXACT
    assert abs(result.success_prob - helstrom(ensemble).success_prob) < 1e-12


def test_optimal_vn_drops_zero_priors():
    rho = [projector(ket(1, 0)), projector(ket(1, 1)), projector(ket(0, 1))]
    ensemble = validate_ensemble([0.5, 0.5, 0.0], rho)
    result = optimal_vn(ensemble)
    assert len(result.measurement.effects) == 3
    np.testing.assert_allclose(result.measurement.effects[2], np.zeros((2, 2)), atol=1e-12)
    reduced = validate_ensemble([0.5, 0.5], rho[:2])
    assert abs(result.success_prob - helstrom(reduced).success_prob) < 1e-10


def test_optimal_vn_needs_two_members():
    with pytest.raises(WrongMemberCount):
        optimal_vn(random_ensemble(1, 2, seed=0))
    with pytest.raises(DimensionMismatch):
        optimal_vn(random_ensemble(3, 2, seed=0), joint_dim=4)


def test_optimal_vn_on_orthonormal_basis():
    ensemble = validate_ensemble(
        [0.2, 0.3, 0.5], [projector(ket(1, 0, 0)), projector(ket(0, 1, 0)), projector(ket(0, 0, 1))]
    )
    result = optimal_vn(ensemble, restarts=5, seed=1)
    assert result.success_prob > 1.0 - 1e-6
    assert result.method is DiscriminationMethod.VN_OPTIMIZED
    assert result.measurement.is_projective


def test_rank_compositions_pad_small_ranks():
    ensemble = random_ensemble(3, 4, seed=3, ranks=[1, 1, 1])
    compositions = rank_compositions(ensemble)
    assert len(compositions) == 1
    assert sum(compositions[0]) == 4


def test_rank_compositions_enumerate_full_ranks():
    ensemble = random_ensemble(3, 2, seed=3, ranks=[2, 2, 2])
    compositions = rank_compositions(ensemble)
    assert all(sum(c) == 2 for c in compositions)
    assert len(compositions) == 6


@pytest.mark.parametrize("seed", range(3))
def test_optimal_vn_beats_brute_force_on_qutrits(seed):
    ensemble = random_ensemble(3, 3, seed=seed, ranks=[1, 1, 1])
    result = optimal_vn(ensemble, restarts=20, seed=seed)
    scanned = scan_composition(ensemble, (1, 1, 1), samples=300, seed=seed, keep=2)
    assert result.success_prob >= scanned - 1e-6
    # the optimum is never worse than the least-square measurement
    assert result.success_prob >= lsm(ensemble).success_prob - 1e-9


@pytest.mark.parametrize("seed", range(3))
def test_helstrom_matches_brute_force(seed):
    ensemble = random_ensemble(2, 2, seed=seed)
    brute = scan_two_outcome(ensemble, samples=500, seed=seed, keep=3)
    assert abs(helstrom(ensemble).success_prob - brute) < 1e-4


def test_batched_scan_scores_match_single_evaluation():
    ensemble = random_ensemble(3, 3, seed=4)
    weighted = weighted_states(ensemble)
    blocks = rank_blocks((1, 1, 1))
    unitaries = haar_unitaries(np.random.default_rng(5), 3, 20)
    batched = _batch_success(unitaries, weighted, blocks)
    single = [success_value(u, weighted, blocks) for u in unitaries]
    np.testing.assert_allclose(batched, single, atol=1e-12)
