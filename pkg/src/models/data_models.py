"""Data models for the partial-coherence toolkit."""
from enum import Enum
from typing import Dict, List, Optional, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator


def _complex_array(value) -> np.ndarray:
    return np.asarray(value, dtype=complex)


class DistanceKind(str, Enum):
    """Which overlap the distance 1 - X^2 is built from."""
    FIDELITY = "fidelity"
    AFFINITY = "affinity"


class DiscriminationMethod(str, Enum):
    HELSTROM_EXACT = "HelstromExact"
    VN_OPTIMIZED = "VnOptimized"
    LSM = "Lsm"
    EVALUATED = "Evaluated"


class CoherenceMethod(str, Enum):
    HELSTROM_REDUCTION = "HelstromReduction"
    VN_OPTIMIZED = "VnOptimized"
    CLOSED_FORM_AFFINITY = "ClosedFormAffinity"
    CLOSED_FORM_XSTATE = "ClosedFormXstate"


class Exactness(str, Enum):
    EXACT = "Exact"
    UPPER_BOUND = "UpperBound"


class MatrixModel(BaseModel):
    """Base for models that carry numpy arrays."""
    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)


class Spectrum(MatrixModel):
    """Ascending eigenvalues with eigenvectors as orthonormal columns."""
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    @field_validator("eigenvalues", mode="before")
    @classmethod
    def _real(cls, value):
        return np.asarray(value, dtype=float)

    @field_validator("eigenvectors", mode="before")
    @classmethod
    def _complex(cls, value):
        return _complex_array(value)


class DensityMatrix(MatrixModel):
    """Hermitian, positive-semidefinite, unit-trace matrix.

    Build through states.validators.validate_density; the model itself only
    stores the already symmetrized matrix.
    """
    matrix: np.ndarray

    @field_validator("matrix", mode="before")
    @classmethod
    def _complex(cls, value):
        return _complex_array(value)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]


class BipartiteState(MatrixModel):
    """Density matrix on a_n_a (x) b_n_b with a reference basis for party a.

    Columns of basis_a are the reference vectors |i>.
    """
    n_a: int = Field(ge=1)
    n_b: int = Field(ge=1)
    state: DensityMatrix
    basis_a: np.ndarray

    @field_validator("basis_a", mode="before")
    @classmethod
    def _complex(cls, value):
        return _complex_array(value)

    @property
    def matrix(self) -> np.ndarray:
        return self.state.matrix

    @property
    def dim(self) -> int:
        return self.n_a * self.n_b


class EnsembleMember(MatrixModel):
    prior: float = Field(ge=0.0, le=1.0)
    state: DensityMatrix


class Ensemble(MatrixModel):
    """Prior-weighted list of states of equal dimension."""
    members: List[EnsembleMember]

    @property
    def priors(self) -> np.ndarray:
        return np.array([m.prior for m in self.members], dtype=float)

    @property
    def states(self) -> List[np.ndarray]:
        return [m.state.matrix for m in self.members]

    @property
    def dim(self) -> int:
        return self.members[0].state.dim

    def __len__(self) -> int:
        return len(self.members)


class SchmidtForm(MatrixModel):
    """psi = sum_i sqrt(coefficients[i]) |basis_a[:, i]> (x) |basis_b[:, i]>.

    coefficients are the squared amplitudes, sorted descending.
    """
    coefficients: np.ndarray
    basis_a: np.ndarray
    basis_b: np.ndarray


class KrausChannel(MatrixModel):
    """Kraus operators K_n of shape (dim_out, dim_in)."""
    operators: List[np.ndarray]

    @field_validator("operators", mode="before")
    @classmethod
    def _complex(cls, value):
        return [_complex_array(k) for k in value]

    @property
    def dim_in(self) -> int:
        return self.operators[0].shape[1]

    @property
    def dim_out(self) -> int:
        return self.operators[0].shape[0]


class Povm(MatrixModel):
    """Positive effects summing to the identity."""
    effects: List[np.ndarray]

    @field_validator("effects", mode="before")
    @classmethod
    def _complex(cls, value):
        return [_complex_array(e) for e in value]

    @property
    def is_projective(self) -> bool:
        return all(np.allclose(e @ e, e, atol=1e-8) for e in self.effects)


class OptimizerCertificate(BaseModel):
    """What a random-restart search did and how it ended."""
    restarts: int = 0
    best_restart: int = 0
    converged: bool = True
    iterations: int = 0
    composition: Optional[Tuple[int, ...]] = None
    compositions_searched: int = 0


class DiscriminationResult(MatrixModel):
    success_prob: float
    error_prob: float
    measurement: Povm
    method: DiscriminationMethod
    certificate: OptimizerCertificate = Field(default_factory=OptimizerCertificate)


class CoherenceReport(MatrixModel):
    """Partial-coherence value with its closest partial-incoherent state."""
    value: float
    kind: DistanceKind
    cpis: DensityMatrix
    method: CoherenceMethod
    exactness: Exactness
    certificate: Optional[OptimizerCertificate] = None
    diagnostics: Dict[str, float] = Field(default_factory=dict)


class Diagnostics(BaseModel):
    """Collects numeric side notes (clamp overshoots and the like)."""
    entries: Dict[str, float] = Field(default_factory=dict)

    def record(self, name: str, value: float) -> None:
        # keep the largest value seen under each name
        previous = self.entries.get(name)
        if previous is None or value > previous:
            self.entries[name] = float(value)


class RoundtripReport(BaseModel):
    """Recovery of priors and spectra after embedding an ensemble into a state."""
    priors: List[float]
    recovered_priors: List[float]
    prior_defect: float
    spectral_defect: float
    passed: bool


class BoundCheckReport(BaseModel):
    """Partial coherence of an embedded ensemble against its discrimination errors."""
    fidelity_coherence: float
    reference_error: float
    reference_method: DiscriminationMethod
    bound_holds: bool
    linearly_independent: bool
    equality_holds: Optional[bool] = None
    lsm_error: float
    affinity_coherence: float
    lsm_identity_defect: float
    lsm_identity_holds: bool


class CorrelationReport(MatrixModel):
    """Partial coherence minimised over a family of local bases."""
    value: float
    kind: DistanceKind
    basis_a: np.ndarray
    upper_bound: bool
    restarts: int = 0
