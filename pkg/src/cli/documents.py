"""JSON documents for states, ensembles, channels and results."""
import hashlib
import json
import logging
from enum import Enum
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, ValidationError

from ..models.data_models import BipartiteState, DensityMatrix, Ensemble, KrausChannel
from ..states.validators import (
    validate_bipartite,
    validate_channel,
    validate_density,
    validate_ensemble,
    validate_unit_vector,
)
from ..utils.errors import (
    DimensionMismatch,
    DocumentSyntaxError,
    DocumentValidationError,
    SchemaError,
    ToolkitError,
)

logger = logging.getLogger("partial_coherence")

SCHEMA_VERSION = "1.0"

DomainObject = Union[DensityMatrix, BipartiteState, Ensemble, KrausChannel, np.ndarray]


class DocumentKind(str, Enum):
    DENSITY = "density"
    BIPARTITE = "bipartite"
    ENSEMBLE = "ensemble"
    CHANNEL = "channel"
    PURE = "pure"
    BASIS = "basis"


class StateDocument(BaseModel):
    """Serialized input object; complex entries are [re, im] pairs."""
    model_config = ConfigDict(extra="forbid")

    schema_version: str = SCHEMA_VERSION
    kind: DocumentKind
    dims: List[int]
    data: Any
    basis_a: Optional[Any] = None
    priors: Optional[List[float]] = None


class ResultDocument(BaseModel):
    """Output of one CLI command."""
    model_config = ConfigDict(extra="forbid")

    command: str
    status: str = "ok"
    inputs_digest: str
    values: Dict[str, Any] = Field(default_factory=dict)
    method: Optional[str] = None
    exactness: Optional[str] = None
    tolerance: Optional[float] = None
    diagnostics: Dict[str, Any] = Field(default_factory=dict)
    error: Optional[Dict[str, Any]] = None
    elapsed_ms: float = 0.0


# complex codec

def encode_complex(value: complex) -> List[float]:
    c = complex(value)
    return [float(c.real), float(c.imag)]


def encode_array(arr: np.ndarray) -> Any:
    """Nested lists of [re, im] pairs, row-major."""
    a = np.asarray(arr, dtype=complex)
    if a.ndim == 0:
        return encode_complex(a.item())
    return [encode_array(row) for row in a]


def _is_pair(value: Any) -> bool:
    return (
        isinstance(value, list)
        and len(value) == 2
        and all(isinstance(x, (int, float)) and not isinstance(x, bool) for x in value)
    )


def decode_vector(data: Any, path: str) -> np.ndarray:
    if not isinstance(data, list) or not data:
        raise SchemaError("Expected a non-empty list of [re, im] pairs", path)
    out = np.empty(len(data), dtype=complex)
    for idx, entry in enumerate(data):
        if not _is_pair(entry):
            raise SchemaError("Expected an [re, im] pair", f"{path}/{idx}")
        out[idx] = complex(entry[0], entry[1])
    return out


def decode_matrix(data: Any, path: str) -> np.ndarray:
    if not isinstance(data, list) or not data:
        raise SchemaError("Expected a non-empty list of rows", path)
    rows = [decode_vector(row, f"{path}/{idx}") for idx, row in enumerate(data)]
    width = len(rows[0])
    for idx, row in enumerate(rows):
        if len(row) != width:
            raise SchemaError(f"Row has {len(row)} entries, expected {width}", f"{path}/{idx}")
    return np.vstack(rows)


# parsing

def _load_json(raw: Union[bytes, str]) -> Any:
    try:
        text = raw.decode("utf-8") if isinstance(raw, bytes) else raw
        return json.loads(text)
    except UnicodeDecodeError as e:
        raise DocumentSyntaxError(f"Input is not UTF-8: {e}") from e
    except json.JSONDecodeError as e:
        raise DocumentSyntaxError(f"Invalid JSON at line {e.lineno} column {e.colno}: {e.msg}") from e


def _pointer(loc: Sequence[Any]) -> str:
    return "/" + "/".join(str(part) for part in loc)


def _require_dims(doc: StateDocument, count: int) -> None:
    if len(doc.dims) != count or any(d < 1 for d in doc.dims):
        raise SchemaError(f"Expected {count} positive dimension(s)", "/dims")


def _shape_check(m: np.ndarray, rows: int, cols: int, path: str) -> None:
    if m.shape != (rows, cols):
        raise SchemaError(f"Matrix has shape {m.shape}, expected ({rows}, {cols})", path)


def _build_object(doc: StateDocument) -> DomainObject:
    kind = doc.kind
    if kind is DocumentKind.DENSITY:
        _require_dims(doc, 1)
        m = decode_matrix(doc.data, "/data")
        _shape_check(m, doc.dims[0], doc.dims[0], "/data")
        return validate_density(m)

    if kind is DocumentKind.BIPARTITE:
        _require_dims(doc, 2)
        n_a, n_b = doc.dims
        m = decode_matrix(doc.data, "/data")
        _shape_check(m, n_a * n_b, n_a * n_b, "/data")
        basis = None
        if doc.basis_a is not None:
            basis = decode_matrix(doc.basis_a, "/basis_a")
            _shape_check(basis, n_a, n_a, "/basis_a")
        return validate_bipartite(m, n_a, n_b, basis)

    if kind is DocumentKind.PURE:
        if len(doc.dims) not in (1, 2) or any(d < 1 for d in doc.dims):
            raise SchemaError("Expected one or two positive dimensions", "/dims")
        vec = decode_vector(doc.data, "/data")
        if vec.size != int(np.prod(doc.dims)):
            raise SchemaError(f"Vector has length {vec.size}, expected {int(np.prod(doc.dims))}", "/data")
        return validate_unit_vector(vec)

    if kind is DocumentKind.ENSEMBLE:
        _require_dims(doc, 1)
        if not isinstance(doc.data, list) or not doc.data:
            raise SchemaError("Expected a non-empty list of matrices", "/data")
        if doc.priors is None:
            raise SchemaError("Ensemble documents need priors", "/priors")
        states = []
        for idx, entry in enumerate(doc.data):
            m = decode_matrix(entry, f"/data/{idx}")
            _shape_check(m, doc.dims[0], doc.dims[0], f"/data/{idx}")
            states.append(m)
        if len(doc.priors) != len(states):
            raise SchemaError(f"{len(doc.priors)} priors for {len(states)} states", "/priors")
        return validate_ensemble(doc.priors, states)

    if kind is DocumentKind.CHANNEL:
        _require_dims(doc, 2)
        dim_in, dim_out = doc.dims
        if not isinstance(doc.data, list) or not doc.data:
            raise SchemaError("Expected a non-empty list of Kraus operators", "/data")
        ops = []
        for idx, entry in enumerate(doc.data):
            k = decode_matrix(entry, f"/data/{idx}")
            _shape_check(k, dim_out, dim_in, f"/data/{idx}")
            ops.append(k)
        return validate_channel(ops)

    _require_dims(doc, 1)
    basis = decode_matrix(doc.data, "/data")
    _shape_check(basis, doc.dims[0], doc.dims[0], "/data")
    return basis


def parse_document(raw: Union[bytes, str]) -> StateDocument:
    """
    Parse and validate a StateDocument.

    The document is also turned into its domain object once, so anything
    returned here passes the state validators.

    Args:
        raw: UTF-8 JSON bytes or text

    Returns:
        StateDocument

    Raises:
        DocumentSyntaxError, SchemaError, DocumentValidationError
    """
    payload = _load_json(raw)
    if not isinstance(payload, dict):
        raise SchemaError("Document must be a JSON object", "/")
    try:
        doc = StateDocument.model_validate(payload)
    except ValidationError as e:
        first = e.errors()[0]
        raise SchemaError(first["msg"], _pointer(first["loc"])) from e
    if doc.schema_version != SCHEMA_VERSION:
        raise SchemaError(f"Unsupported schema version {doc.schema_version!r}", "/schema_version")
    to_object(doc)
    return doc


def to_object(doc: StateDocument) -> DomainObject:
    """Domain object for a parsed document; invariant failures become DocumentValidationError."""
    try:
        return _build_object(doc)
    except (SchemaError, DocumentValidationError):
        raise
    except ToolkitError as e:
        raise DocumentValidationError(str(e), which=type(e).__name__) from e


def load_document(path: Union[str, Path]) -> StateDocument:
    try:
        raw = Path(path).read_bytes()
    except OSError as e:
        raise DocumentSyntaxError(f"Cannot read {path}: {e.strerror}") from e
    return parse_document(raw)


# building documents from objects

def density_document(rho: DensityMatrix) -> StateDocument:
    return StateDocument(kind=DocumentKind.DENSITY, dims=[rho.dim], data=encode_array(rho.matrix))


def bipartite_document(state: BipartiteState) -> StateDocument:
    return StateDocument(
        kind=DocumentKind.BIPARTITE,
        dims=[state.n_a, state.n_b],
        data=encode_array(state.matrix),
        basis_a=encode_array(state.basis_a),
    )


def ensemble_document(ensemble: Ensemble) -> StateDocument:
    return StateDocument(
        kind=DocumentKind.ENSEMBLE,
        dims=[ensemble.dim],
        data=[encode_array(rho) for rho in ensemble.states],
        priors=[float(p) for p in ensemble.priors],
    )


def channel_document(channel: KrausChannel) -> StateDocument:
    return StateDocument(
        kind=DocumentKind.CHANNEL,
        dims=[channel.dim_in, channel.dim_out],
        data=[encode_array(k) for k in channel.operators],
    )


def pure_document(psi: np.ndarray, n_a: int, n_b: Optional[int] = None) -> StateDocument:
    dims = [n_a] if n_b is None else [n_a, n_b]
    if np.asarray(psi).size != int(np.prod(dims)):
        raise DimensionMismatch(f"Vector of length {np.asarray(psi).size} does not match dims {dims}")
    return StateDocument(kind=DocumentKind.PURE, dims=dims, data=encode_array(np.asarray(psi).reshape(-1)))


def basis_document(basis: np.ndarray) -> StateDocument:
    return StateDocument(kind=DocumentKind.BASIS, dims=[basis.shape[0]], data=encode_array(basis))


# serialization

def _dump(payload: Dict[str, Any]) -> str:
    return json.dumps(payload, sort_keys=True, allow_nan=False, separators=(",", ":"))


def serialize(doc: BaseModel) -> str:
    """Canonical JSON: sorted keys, shortest float repr, no NaN."""
    return _dump(doc.model_dump(mode="json", exclude_none=True))


def inputs_digest(raw_inputs: Sequence[bytes], parameters: Dict[str, Any]) -> str:
    """sha256 over the raw input bytes and the canonical parameter set."""
    h = hashlib.sha256()
    for raw in raw_inputs:
        h.update(hashlib.sha256(raw).digest())
    h.update(_dump(parameters).encode("utf-8"))
    return h.hexdigest()


class DocumentWriter:
    """Writes ResultDocuments to stdout or a file, plus optional side documents."""

    def __init__(self, out_path: Optional[str] = None, stream=None):
        """
        Initialize the writer.

        Args:
            out_path: File to write the result to, or None for the stream
            stream: Text stream used when out_path is None
        """
        self.out_path = out_path
        self.stream = stream

    def side_path(self, suffix: str) -> Optional[str]:
        return None if self.out_path is None else f"{self.out_path}.{suffix}.json"

    def write_side(self, suffix: str, doc: StateDocument) -> Optional[str]:
        path = self.side_path(suffix)
        if path is None:
            return None
        Path(path).write_text(serialize(doc) + "\n", encoding="utf-8")
        logger.info(f"Wrote {suffix} document to {path}")
        return path

    def write(self, result: ResultDocument) -> None:
        text = serialize(result) + "\n"
        if self.out_path is None:
            self.stream.write(text)
            self.stream.flush()
        else:
            Path(self.out_path).write_text(text, encoding="utf-8")
            logger.info(f"Wrote result to {self.out_path}")
