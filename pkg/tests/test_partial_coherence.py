"""Tests for fidelity and affinity partial coherence."""
import numpy as np
import pytest

from src.coherence.partial_coherence import (
    affinity_coherence,
    affinity_partial_coherence,
    coherence,
    fidelity_coherence,
    fidelity_partial_coherence,
    partial_coherence,
    qsd_ensemble_of,
    skew_information_coherence,
)
from src.metrics.channels import apply_channel
from src.metrics.distances import distance
from src.models.data_models import CoherenceMethod, DistanceKind, Exactness
from src.qsd.discrimination import helstrom, lsm_error
from src.states.generators import (
    random_bipartite,
    random_density,
    random_partial_incoherent_channel,
    random_partial_incoherent_state,
    random_unitary,
)
from src.states.structure import is_partial_incoherent, product_state, rebase
from src.states.validators import validate_bipartite

from .conftest import ket, projector

KINDS = [DistanceKind.FIDELITY, DistanceKind.AFFINITY]


@pytest.mark.parametrize("kind", KINDS)
def test_bell_state(bell, kind):
    report = partial_coherence(bell, kind)
    assert abs(report.value - 0.5) < 1e-9
    assert report.exactness is Exactness.EXACT


@pytest.mark.parametrize("kind", KINDS)
def test_bell_state_in_rotated_basis(bell, hadamard, kind):
    assert abs(partial_coherence(rebase(bell, hadamard), kind).value - 0.5) < 1e-9


@pytest.mark.parametrize("seed", range(3))
def test_free_states_have_zero_coherence(seed):
    free = random_partial_incoherent_state(2, 3, seed)
    assert fidelity_partial_coherence(free).value < 1e-9
    assert affinity_partial_coherence(random_partial_incoherent_state(3, 2, seed)).value < 1e-9


def test_maximally_mixed_state_is_free(maximally_mixed_pair):
    for kind in KINDS:
        assert partial_coherence(maximally_mixed_pair, kind).value < 1e-9


@pytest.mark.parametrize("seed", range(4))
def test_fidelity_value_is_helstrom_error(seed):
    state = random_bipartite(2, 2 + seed % 2, seed)
    report = fidelity_partial_coherence(state)
    assert report.method is CoherenceMethod.HELSTROM_REDUCTION
    assert abs(report.value - helstrom(qsd_ensemble_of(state)).error_prob) < 1e-10
    assert abs(report.diagnostics["cpis_distance"] - report.value) < 1e-7
    assert report.diagnostics["error_lower_bound"] <= report.value + 1e-9


@pytest.mark.parametrize("seed", range(4))
def test_affinity_closed_form(seed):
    state = rebase(random_bipartite(3, 2, seed), random_unitary(3, seed + 1))
    report = affinity_partial_coherence(state)
    assert abs(report.diagnostics["cpis_distance"] - report.value) < 1e-8
    assert abs(skew_information_coherence(state) - report.value) < 1e-9
    assert abs(lsm_error(qsd_ensemble_of(state)) - report.value) < 1e-8


@pytest.mark.parametrize("seed", range(3))
def test_cpis_is_partial_incoherent(seed):
    state = rebase(random_bipartite(2, 2, seed), random_unitary(2, seed + 7))
    for kind in KINDS:
        cpis = partial_coherence(state, kind).cpis
        assert is_partial_incoherent(validate_bipartite(cpis, 2, 2, state.basis_a), tol=1e-8)


@pytest.mark.parametrize("seed", range(3))
def test_fidelity_never_exceeds_affinity(seed):
    state = random_bipartite(2, 3, seed)
    assert fidelity_partial_coherence(state).value <= affinity_partial_coherence(state).value + 1e-9


@pytest.mark.parametrize("kind", KINDS)
@pytest.mark.parametrize("seed", range(3))
def test_invariant_under_unitaries_on_b(kind, seed):
    state = random_bipartite(2, 2, seed)
    local = np.kron(np.eye(2), random_unitary(2, seed + 3))
    moved = validate_bipartite(local @ state.matrix @ local.conj().T, 2, 2)
    assert abs(partial_coherence(moved, kind).value - partial_coherence(state, kind).value) < 1e-8


@pytest.mark.parametrize("kind", KINDS)
@pytest.mark.parametrize("seed", range(3))
def test_monotone_under_partial_incoherent_channels(kind, seed):
    state = random_bipartite(2, 2, seed)
    channel = random_partial_incoherent_channel(2, 2, 3, seed + 40)
    after = validate_bipartite(apply_channel(state.state, channel), 2, 2)
    assert partial_coherence(after, kind).value <= partial_coherence(state, kind).value + 1e-7


def test_zero_weight_block_is_dropped():
    psi = ket(1, 1, 0)
    state = product_state(projector(psi), np.eye(2) / 2)
    report = fidelity_partial_coherence(state)
    assert report.method is CoherenceMethod.HELSTROM_REDUCTION
    assert abs(report.value - 0.5) < 1e-9
    assert len(qsd_ensemble_of(state)) == 2


def test_single_surviving_block():
    state = product_state(projector(ket(1, 0, 0)), random_density(2, seed=1))
    report = fidelity_partial_coherence(state)
    assert report.value < 1e-12
    np.testing.assert_allclose(report.cpis.matrix, state.matrix, atol=1e-9)


def test_three_blocks_use_vn_optimizer():
    state = random_bipartite(3, 2, seed=5)
    report = fidelity_partial_coherence(state, restarts=4, seed=2)
    assert report.method is CoherenceMethod.VN_OPTIMIZED
    assert report.certificate is not None
    assert 0.0 <= report.value <= 1.0
    assert report.diagnostics["error_lower_bound"] <= report.value + 1e-9


def test_single_qubit_coherence(plus_state, hadamard):
    assert abs(fidelity_coherence(plus_state).value - 0.5) < 1e-9
    assert abs(affinity_coherence(plus_state).value - 0.5) < 1e-9
    for kind in KINDS:
        assert coherence(plus_state, kind, basis=hadamard).value < 1e-9


def test_uniform_qutrit_coherence():
    rho = projector(ket(1, 1, 1))
    fid = coherence(rho, DistanceKind.FIDELITY, restarts=3)
    assert abs(fid.value - 2.0 / 3.0) < 1e-9
    # identical members are not linearly independent
    assert fid.exactness is Exactness.UPPER_BOUND
    assert abs(coherence(rho, DistanceKind.AFFINITY).value - 2.0 / 3.0) < 1e-9


def test_incoherent_single_system():
    rho = np.diag([0.2, 0.3, 0.5])
    for kind in KINDS:
        assert coherence(rho, kind, restarts=2).value < 1e-6


def test_single_system_matches_distance_to_cpis(plus_state):
    report = affinity_coherence(plus_state)
    assert abs(distance(plus_state, report.cpis, DistanceKind.AFFINITY) - report.value) < 1e-9
