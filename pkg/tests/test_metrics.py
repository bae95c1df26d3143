"""Tests for fidelity, affinity, distances and channel subselection."""
import numpy as np
import pytest

from src.metrics.channels import apply_channel, contractibility_slack, subselect, subselection_average
from src.metrics.distances import affinity, distance, fidelity, fidelity_nested, overlap
from src.models.data_models import Diagnostics, DistanceKind
from src.states.generators import random_channel, random_density, random_partial_incoherent_channel
from src.utils.errors import DimensionMismatch

from .conftest import ket, projector

KINDS = [DistanceKind.FIDELITY, DistanceKind.AFFINITY]


@pytest.mark.parametrize("kind", KINDS)
def test_identical_and_orthogonal_states(kind):
    rho = random_density(3, seed=1)
    assert abs(overlap(rho, rho, kind) - 1.0) < 1e-9
    assert distance(rho, rho, kind) < 1e-9
    zero, one = projector(ket(1, 0)), projector(ket(0, 1))
    assert overlap(zero, one, kind) < 1e-12
    assert abs(distance(zero, one, kind) - 1.0) < 1e-12


def test_pure_state_fidelity_is_overlap_modulus():
    psi, phi = ket(1, 0), ket(1, 1)
    expected = abs(np.vdot(psi, phi))
    assert abs(fidelity(projector(psi), projector(phi)) - expected) < 1e-9
    # for pure states sqrt(rho) = rho, so the affinity is |<psi|phi>|^2
    assert abs(affinity(projector(psi), projector(phi)) - expected ** 2) < 1e-9


def test_commuting_states_reduce_to_classical_overlaps():
    p, q = np.array([0.5, 0.3, 0.2]), np.array([0.1, 0.1, 0.8])
    expected = float(np.sum(np.sqrt(p * q)))
    assert abs(fidelity(np.diag(p), np.diag(q)) - expected) < 1e-12
    assert abs(affinity(np.diag(p), np.diag(q)) - expected) < 1e-12


@pytest.mark.parametrize("dim", [2, 3, 4])
@pytest.mark.parametrize("seed", range(3))
def test_fidelity_forms_agree_and_bound_affinity(dim, seed):
    rho = random_density(dim, seed=seed)
    sigma = random_density(dim, rank=1 + seed % dim, seed=seed + 50)
    f = fidelity(rho, sigma)
    assert abs(f - fidelity_nested(rho, sigma)) < 1e-8
    assert affinity(rho, sigma) <= f + 1e-9


@pytest.mark.parametrize("kind", KINDS)
def test_distance_is_symmetric(kind):
    rho, sigma = random_density(4, seed=7), random_density(4, 2, seed=8)
    assert abs(distance(rho, sigma, kind) - distance(sigma, rho, kind)) < 1e-10


def test_dimension_mismatch():
    with pytest.raises(DimensionMismatch):
        fidelity(random_density(2, seed=0), random_density(3, seed=0))
    with pytest.raises(DimensionMismatch):
        apply_channel(random_density(3, seed=0), random_channel(2, 2, seed=0))


def test_clamp_is_recorded():
    diagnostics = Diagnostics()
    rho = random_density(3, seed=4)
    value = fidelity(rho, rho, diagnostics)
    assert value <= 1.0
    for overshoot in diagnostics.entries.values():
        assert overshoot < 1e-8


def test_subselection_branches_sum_to_one():
    rho = random_density(3, seed=2)
    channel = random_channel(3, 4, seed=3)
    branches = subselect(rho, channel)
    assert len(branches) == 4
    assert abs(sum(p for p, _ in branches) - 1.0) < 1e-10
    mixed = sum(p * state.matrix for p, state in branches if state is not None)
    np.testing.assert_allclose(mixed, apply_channel(rho, channel).matrix, atol=1e-10)


@pytest.mark.parametrize("kind", KINDS)
@pytest.mark.parametrize("weights", ["rho", "sigma"])
@pytest.mark.parametrize("seed", range(4))
def test_strong_contractibility(kind, weights, seed):
    rho = random_density(4, seed=seed)
    sigma = random_density(4, rank=2, seed=seed + 10)
    for channel in (random_channel(4, 3, seed + 20), random_partial_incoherent_channel(2, 2, 3, seed + 30)):
        assert contractibility_slack(rho, sigma, channel, kind, weights) >= -1e-8


@pytest.mark.parametrize("kind", KINDS)
def test_unitary_channel_has_zero_slack(kind):
    rho, sigma = random_density(3, seed=1), random_density(3, seed=2)
    unitary = random_channel(3, 1, seed=3)
    assert abs(contractibility_slack(rho, sigma, unitary, kind)) < 1e-8
    assert abs(subselection_average(rho, sigma, unitary, kind) - distance(rho, sigma, kind)) < 1e-8
