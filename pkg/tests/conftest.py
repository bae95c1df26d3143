"""Shared fixtures and helpers for the test suite."""
import numpy as np
import pytest

from src.states.structure import bell_state
from src.states.validators import validate_bipartite, validate_density


def ket(*amplitudes) -> np.ndarray:
    vec = np.asarray(amplitudes, dtype=complex)
    return vec / np.linalg.norm(vec)


def projector(vec) -> np.ndarray:
    vec = np.asarray(vec, dtype=complex)
    return np.outer(vec, vec.conj())


def is_density(m: np.ndarray, tol: float = 1e-9) -> bool:
    m = np.asarray(m)
    hermitian = np.allclose(m, m.conj().T, atol=tol)
    trace = abs(np.trace(m) - 1.0) <= tol
    return bool(hermitian and trace and np.linalg.eigvalsh((m + m.conj().T) / 2)[0] >= -tol)


@pytest.fixture
def bell():
    return bell_state(2)


@pytest.fixture
def plus_state():
    return validate_density(projector(ket(1, 1)))


@pytest.fixture
def hadamard():
    return np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2)


@pytest.fixture
def maximally_mixed_pair():
    return validate_bipartite(np.eye(4) / 4, 2, 2)
