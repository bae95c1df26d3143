"""Validation of raw matrices into the toolkit's state types."""
import logging
from typing import Optional, Sequence, Type, TypeVar, Union

import numpy as np
from pydantic import BaseModel, ValidationError

from ..linalg import kernels
from ..models.data_models import (
    BipartiteState,
    DensityMatrix,
    Ensemble,
    EnsembleMember,
    KrausChannel,
    Povm,
)
from ..utils.errors import (
    CountMismatch,
    DimensionMismatch,
    NonSquare,
    NotComplete,
    NotNormalized,
    NotPsd,
    NotUnitary,
    PriorsSum,
    ToolkitError,
    TraceNotOne,
)

logger = logging.getLogger("partial_coherence")

M = TypeVar("M", bound=BaseModel)

STATE_TOL = 1e-8
PRIOR_SUM_TOL = 1e-10
UNITARY_TOL = 1e-10
COMPLETENESS_TOL = 1e-8
EFFECT_PSD_TOL = 1e-9
NORM_TOL = 1e-10

MatrixLike = Union[np.ndarray, Sequence]


def build_model(model: Type[M], error: Type[ToolkitError], **fields) -> M:
    """Construct a domain model, re-raising pydantic failures as the given toolkit error."""
    try:
        return model(**fields)
    except ValidationError as e:
        first = e.errors()[0]
        location = ".".join(str(part) for part in first["loc"])
        raise error(f"{model.__name__}.{location}: {first['msg']}") from e


def validate_density(m: MatrixLike) -> DensityMatrix:
    """
    Check the density-matrix invariants and store the symmetrized matrix.

    Eigenvalues between -1e-8 and the linalg clipping band are clipped to zero
    so every stored state is accepted by the PSD kernels.

    Args:
        m: Square complex matrix

    Returns:
        DensityMatrix

    Raises:
        NonHermitian, NotPsd, TraceNotOne
    """
    sym = kernels.hermitian_part(m, tol=STATE_TOL)
    values = np.linalg.eigvalsh(sym)
    if values.size and values[0] < -STATE_TOL:
        raise NotPsd(f"Smallest eigenvalue {values[0]:.3e} is below -{STATE_TOL:.0e}")
    trace = float(np.real(np.trace(sym)))
    if abs(trace - 1.0) > STATE_TOL:
        raise TraceNotOne(f"Trace {trace:.12g} differs from 1")

    if values.size and values[0] < -kernels.CLIP_REL_TOL * max(1.0, float(values[-1])):
        logger.debug(f"Clipping eigenvalue {values[0]:.3e} of a stored state")
        cleaned = kernels.clip_psd(sym)
        sym = cleaned / np.real(np.trace(cleaned))

    return build_model(DensityMatrix, NonSquare, matrix=sym)


def ensure_density(m: Union[DensityMatrix, MatrixLike]) -> DensityMatrix:
    if isinstance(m, DensityMatrix):
        return m
    return validate_density(m)


def validate_bipartite(
    m: Union[DensityMatrix, MatrixLike],
    n_a: int,
    n_b: int,
    basis_a: Optional[MatrixLike] = None
) -> BipartiteState:
    """
    Attach a tensor split and a reference basis for party a to a state.

    Args:
        m: Density matrix of size n_a * n_b
        n_a: Dimension of party a
        n_b: Dimension of party b
        basis_a: Unitary whose columns are the reference basis; identity if None

    Returns:
        BipartiteState
    """
    state = ensure_density(m)
    if n_a < 1 or n_b < 1 or state.dim != n_a * n_b:
        raise DimensionMismatch(f"State of size {state.dim} does not split as {n_a} x {n_b}")

    basis = np.eye(n_a, dtype=complex) if basis_a is None else kernels.require_square(basis_a)
    if basis.shape[0] != n_a:
        raise DimensionMismatch(f"Reference basis has size {basis.shape[0]}, expected {n_a}")
    defect = kernels.unitarity_defect(basis)
    if defect > UNITARY_TOL:
        raise NotUnitary(f"Reference basis unitarity defect {defect:.3e}")

    return build_model(BipartiteState, DimensionMismatch, n_a=n_a, n_b=n_b, state=state, basis_a=basis)


def validate_ensemble(
    priors: Sequence[float],
    states: Sequence[Union[DensityMatrix, MatrixLike]]
) -> Ensemble:
    """
    Build an ensemble from priors and states.

    Args:
        priors: Nonnegative weights summing to one
        states: Density matrices of equal dimension

    Returns:
        Ensemble
    """
    weights = np.asarray(priors, dtype=float)
    if len(weights) != len(states) or len(states) == 0:
        raise DimensionMismatch(f"Got {len(weights)} priors for {len(states)} states")
    if np.any(weights < 0):
        raise PriorsSum("Priors must be nonnegative")
    total = float(np.sum(weights))
    if abs(total - 1.0) > PRIOR_SUM_TOL:
        raise PriorsSum(f"Priors sum to {total:.12g}, expected 1")

    densities = [ensure_density(s) for s in states]
    dims = {d.dim for d in densities}
    if len(dims) != 1:
        raise DimensionMismatch(f"Ensemble members have mixed dimensions {sorted(dims)}")

    members = [
        build_model(EnsembleMember, PriorsSum, prior=min(1.0, float(w)), state=d)
        for w, d in zip(weights, densities)
    ]
    return build_model(Ensemble, CountMismatch, members=members)


def validate_channel(operators: Sequence[MatrixLike]) -> KrausChannel:
    """
    Check the Kraus completeness relation sum_n K_n^dagger K_n = I.

    Args:
        operators: Kraus operators of a common shape (dim_out, dim_in)

    Returns:
        KrausChannel
    """
    ops = [kernels.as_matrix(k) for k in operators]
    if not ops:
        raise NotComplete("A channel needs at least one Kraus operator")
    shapes = {k.shape for k in ops}
    if len(shapes) != 1:
        raise DimensionMismatch(f"Kraus operators have mixed shapes {sorted(shapes)}")

    dim_in = ops[0].shape[1]
    gram = sum(kernels.dagger(k) @ k for k in ops)
    defect = float(np.max(np.abs(gram - np.eye(dim_in))))
    if defect > COMPLETENESS_TOL:
        raise NotComplete(f"Kraus completeness defect {defect:.3e}")
    return build_model(KrausChannel, NotComplete, operators=ops)


def validate_povm(effects: Sequence[MatrixLike]) -> Povm:
    """
    Check that effects are PSD and sum to the identity.

    Args:
        effects: Square matrices of equal size

    Returns:
        Povm with symmetrized effects
    """
    mats = [kernels.hermitian_part(e) for e in effects]
    if not mats:
        raise NotComplete("A POVM needs at least one effect")
    dim = mats[0].shape[0]
    if any(e.shape != (dim, dim) for e in mats):
        raise DimensionMismatch("POVM effects have mixed sizes")
    for idx, e in enumerate(mats):
        smallest = float(np.linalg.eigvalsh(e)[0])
        if smallest < -EFFECT_PSD_TOL:
            raise NotPsd(f"Effect {idx} has eigenvalue {smallest:.3e}")
    defect = float(np.max(np.abs(sum(mats) - np.eye(dim))))
    if defect > COMPLETENESS_TOL:
        raise NotComplete(f"POVM effects sum to identity only within {defect:.3e}")
    return build_model(Povm, NotComplete, effects=mats)


def validate_unit_vector(psi: MatrixLike) -> np.ndarray:
    vec = np.asarray(psi, dtype=complex).reshape(-1)
    norm = float(np.linalg.norm(vec))
    if abs(norm - 1.0) > NORM_TOL:
        raise NotNormalized(f"Vector norm {norm:.12g} differs from 1")
    return vec
