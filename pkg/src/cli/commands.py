"""Command-line surface: argparse subcommands that emit ResultDocuments."""
import argparse
import logging
import sys
import time
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np

from ..coherence.partial_coherence import coherence, partial_coherence
from ..coherence.xstate import xstate_fidelity_pc
from ..correlations.correlated_coherence import correlated_coherence, discord_estimate, gcc
from ..metrics.distances import distance, overlap
from ..models.data_models import (
    BipartiteState,
    CoherenceReport,
    CorrelationReport,
    DensityMatrix,
    DiscriminationResult,
    DiscriminationMethod,
    DistanceKind,
    Ensemble,
)
from ..qsd.discrimination import helstrom, lsm
from ..qsd.vn_optimizer import optimal_vn
from ..qsdstate.embedding import build_qsd_state, discrimination_bound_check, qsd_state_roundtrip
from ..states.structure import rebase
from ..states.validators import validate_bipartite
from ..utils.config import Settings
from ..utils.errors import DocumentSyntaxError, DocumentValidationError, ToolkitError
from . import documents
from .suites import SUITES, run_suites

logger = logging.getLogger("partial_coherence")

DEFAULT_TOL = 1e-8
VERIFY_FAILED = 1


class Invocation:
    """Parsed arguments plus the raw bytes of every input file."""

    def __init__(self, args: argparse.Namespace):
        self.args = args
        self.raw_inputs: List[bytes] = []

    def load(self, path: str) -> documents.StateDocument:
        try:
            raw = Path(path).read_bytes()
        except OSError as e:
            raise DocumentSyntaxError(f"Cannot read {path}: {e.strerror}") from e
        self.raw_inputs.append(raw)
        return documents.parse_document(raw)

    def load_object(self, path: str):
        return documents.to_object(self.load(path))

    @property
    def kind(self) -> DistanceKind:
        return DistanceKind(self.args.kind)

    def parameters(self) -> Dict[str, Any]:
        skip = {"inputs", "state", "ensemble", "first", "second", "basis", "out"}
        return {k: v for k, v in sorted(vars(self.args).items()) if k not in skip}


def _expect(obj, types, path: str):
    if not isinstance(obj, types):
        names = " or ".join(t.__name__ for t in (types if isinstance(types, tuple) else (types,)))
        raise DocumentValidationError(f"{path} must hold a {names} document", which="WrongDocumentKind")
    return obj


def _as_density(obj, path: str) -> DensityMatrix:
    if isinstance(obj, BipartiteState):
        return obj.state
    return _expect(obj, DensityMatrix, path)


def _bipartite(inv: Invocation) -> BipartiteState:
    state = _expect(inv.load_object(inv.args.state), BipartiteState, inv.args.state)
    if inv.args.basis:
        state = rebase(state, _basis(inv))
    return state


def _basis(inv: Invocation) -> np.ndarray:
    return _expect(inv.load_object(inv.args.basis), np.ndarray, inv.args.basis)


def _coherence_values(report: CoherenceReport) -> Tuple[Dict[str, Any], Dict[str, Any]]:
    values = {"value": report.value, "cpis": documents.encode_array(report.cpis.matrix)}
    diagnostics: Dict[str, Any] = dict(report.diagnostics)
    if report.certificate is not None:
        diagnostics["certificate"] = report.certificate.model_dump(mode="json")
    return values, diagnostics


def _result(command: str, inv: Invocation, **fields) -> documents.ResultDocument:
    return documents.ResultDocument(
        command=command,
        inputs_digest=documents.inputs_digest(inv.raw_inputs, inv.parameters()),
        tolerance=inv.args.tol,
        **fields,
    )


# handlers

def cmd_distance(inv: Invocation) -> documents.ResultDocument:
    rho = _as_density(inv.load_object(inv.args.first), inv.args.first)
    sigma = _as_density(inv.load_object(inv.args.second), inv.args.second)
    return _result(
        "distance",
        inv,
        values={
            "distance": distance(rho, sigma, inv.kind),
            "overlap": overlap(rho, sigma, inv.kind),
        },
        method=inv.kind.value,
    )


def cmd_coherence(inv: Invocation) -> documents.ResultDocument:
    rho = _as_density(inv.load_object(inv.args.state), inv.args.state)
    basis = _basis(inv) if inv.args.basis else None
    report = coherence(rho, inv.kind, basis, inv.args.restarts, inv.args.seed)
    values, diagnostics = _coherence_values(report)
    return _result(
        "coherence", inv, values=values, diagnostics=diagnostics,
        method=report.method.value, exactness=report.exactness.value,
    )


def cmd_partial_coherence(inv: Invocation, writer: documents.DocumentWriter) -> documents.ResultDocument:
    state = _bipartite(inv)
    report = partial_coherence(state, inv.kind, inv.args.restarts, inv.args.seed)
    values, diagnostics = _coherence_values(report)
    cpis_state = validate_bipartite(report.cpis, state.n_a, state.n_b, state.basis_a)
    cpis_path = writer.write_side("cpis", documents.bipartite_document(cpis_state))
    if cpis_path is not None:
        values["cpis_path"] = cpis_path
    return _result(
        "partial-coherence", inv, values=values, diagnostics=diagnostics,
        method=report.method.value, exactness=report.exactness.value,
    )


def _discrimination_values(result: DiscriminationResult) -> Dict[str, Any]:
    return {
        "success_prob": result.success_prob,
        "error_prob": result.error_prob,
        "measurement": [documents.encode_array(e) for e in result.measurement.effects],
    }


def cmd_qsd(inv: Invocation) -> documents.ResultDocument:
    ensemble = _expect(inv.load_object(inv.args.ensemble), Ensemble, inv.args.ensemble)
    method = inv.args.method
    if method == "helstrom":
        result = helstrom(ensemble)
    elif method == "lsm":
        result = lsm(ensemble)
    else:
        result = optimal_vn(ensemble, restarts=inv.args.restarts, seed=inv.args.seed)
    exact = result.method is not DiscriminationMethod.VN_OPTIMIZED
    return _result(
        f"qsd {method}", inv,
        values=_discrimination_values(result),
        method=result.method.value,
        exactness=("Exact" if exact else "UpperBound") if method == "optimal-vn" else None,
        diagnostics={"certificate": result.certificate.model_dump(mode="json")},
    )


def cmd_qsd_state(inv: Invocation, writer: documents.DocumentWriter) -> documents.ResultDocument:
    ensemble = _expect(inv.load_object(inv.args.ensemble), Ensemble, inv.args.ensemble)
    if inv.args.action == "build":
        state = build_qsd_state(ensemble)
        doc = documents.bipartite_document(state)
        values: Dict[str, Any] = {"state": doc.model_dump(mode="json", exclude_none=True)}
        path = writer.write_side("state", doc)
        if path is not None:
            values["state_path"] = path
        return _result("qsd-state build", inv, values=values)

    roundtrip = qsd_state_roundtrip(ensemble)
    bounds = discrimination_bound_check(ensemble, inv.args.restarts, inv.args.seed)
    return _result(
        "qsd-state check", inv,
        values={
            "roundtrip": roundtrip.model_dump(mode="json"),
            "bounds": bounds.model_dump(mode="json"),
        },
        method=bounds.reference_method.value,
    )


def cmd_xstate(inv: Invocation) -> documents.ResultDocument:
    state = _bipartite(inv)
    report = xstate_fidelity_pc(state, require_invertible=inv.args.require_invertible)
    values, diagnostics = _coherence_values(report)
    return _result(
        "xstate", inv, values=values, diagnostics=diagnostics,
        method=report.method.value, exactness=report.exactness.value,
    )


def cmd_gcc(inv: Invocation) -> documents.ResultDocument:
    state = _bipartite(inv)
    value = gcc(state, inv.kind, inv.args.restarts, inv.args.seed)
    return _result("gcc", inv, values={"value": value}, method=inv.kind.value)


def _correlation_result(command: str, inv: Invocation, report: CorrelationReport) -> documents.ResultDocument:
    return _result(
        command, inv,
        values={"value": report.value, "basis_a": documents.encode_array(report.basis_a)},
        method=inv.kind.value,
        exactness="UpperBound" if report.upper_bound else "Exact",
        diagnostics={"restarts": report.restarts},
    )


def cmd_cc(inv: Invocation) -> documents.ResultDocument:
    report = correlated_coherence(_bipartite(inv), inv.kind, inv.args.restarts, inv.args.seed)
    return _correlation_result("cc", inv, report)


def cmd_discord(inv: Invocation) -> documents.ResultDocument:
    report = discord_estimate(_bipartite(inv), inv.kind, inv.args.restarts, inv.args.seed)
    return _correlation_result("discord", inv, report)


def cmd_verify(inv: Invocation) -> documents.ResultDocument:
    results = run_suites(inv.args.suite, inv.args.trials, inv.args.seed)
    values = {
        r.suite: {
            "criterion": r.criterion,
            "passed": r.passed,
            "failed": r.failed,
            "checks": [dict(c.model_dump(mode="json"), passed=c.passed) for c in r.checks],
        }
        for r in results
    }
    failed = sum(r.failed for r in results)
    return _result(
        "verify", inv, values=values,
        status="ok" if failed == 0 else "failed",
        diagnostics={"suites": len(results), "failed_checks": failed},
    )


# parser

def build_parser(settings: Optional[Settings] = None) -> argparse.ArgumentParser:
    """
    Build the argparse tree; defaults come from settings.

    Args:
        settings: Loaded Settings, or the built-in defaults if None

    Returns:
        ArgumentParser with one subparser per command
    """
    settings = settings or Settings()

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--kind", choices=[k.value for k in DistanceKind], default=DistanceKind.FIDELITY.value)
    common.add_argument("--seed", type=int, default=settings.seed)
    common.add_argument("--restarts", type=int, default=settings.restarts)
    common.add_argument("--trials", type=int, default=settings.trials)
    common.add_argument("--tol", type=float, default=DEFAULT_TOL)
    common.add_argument("--out", default=None, help="Write the result document to this path")
    common.add_argument("--basis", default=None, help="Basis document overriding the reference basis")

    parser = argparse.ArgumentParser(prog="app.py", description="Partial coherence and state discrimination toolkit")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("distance", parents=[common], help="d_X between two states")
    p.add_argument("first")
    p.add_argument("second")

    p = sub.add_parser("coherence", parents=[common], help="Coherence of a single system")
    p.add_argument("state")

    p = sub.add_parser("partial-coherence", parents=[common], help="Partial coherence of a bipartite state")
    p.add_argument("state")

    p = sub.add_parser("qsd", parents=[common], help="Minimum-error discrimination")
    p.add_argument("method", choices=["helstrom", "lsm", "optimal-vn"])
    p.add_argument("ensemble")

    p = sub.add_parser("qsd-state", parents=[common], help="Embed an ensemble into a bipartite state")
    p.add_argument("action", choices=["build", "check"])
    p.add_argument("ensemble")

    p = sub.add_parser("xstate", parents=[common], help="Closed-form X-state partial coherence")
    p.add_argument("state")
    p.add_argument("--require-invertible", action="store_true")

    for name, text in (
        ("gcc", "Generalised correlated coherence"),
        ("cc", "Correlated coherence"),
        ("discord", "Discord upper bound"),
    ):
        p = sub.add_parser(name, parents=[common], help=text)
        p.add_argument("state")

    p = sub.add_parser("verify", parents=[common], help="Run property suites")
    p.add_argument("--suite", choices=["all"] + list(SUITES), default="all")

    return parser


HANDLERS: Dict[str, Callable] = {
    "distance": cmd_distance,
    "coherence": cmd_coherence,
    "qsd": cmd_qsd,
    "xstate": cmd_xstate,
    "gcc": cmd_gcc,
    "cc": cmd_cc,
    "discord": cmd_discord,
    "verify": cmd_verify,
}

WRITING_HANDLERS: Dict[str, Callable] = {
    "partial-coherence": cmd_partial_coherence,
    "qsd-state": cmd_qsd_state,
}


def _error_document(command: str, inv: Invocation, error: ToolkitError) -> documents.ResultDocument:
    detail: Dict[str, Any] = {"type": type(error).__name__, "message": str(error)}
    for attr in ("path", "which"):
        if getattr(error, attr, None) is not None:
            detail[attr] = getattr(error, attr)
    return documents.ResultDocument(
        command=command,
        status="error",
        inputs_digest=documents.inputs_digest(inv.raw_inputs, inv.parameters()),
        error=detail,
    )


def run_command(
    argv: Sequence[str],
    settings: Optional[Settings] = None,
    writer: Optional[documents.DocumentWriter] = None
) -> Tuple[documents.ResultDocument, int]:
    """
    Run one command and return its ResultDocument with the exit code.

    Exit codes: 0 success, 1 failed verify checks, 2 invalid input,
    3 numerical failure. argparse usage errors exit with 2 on their own.

    Args:
        argv: Arguments without the program name
        settings: Defaults for flags
        writer: Where side documents go; nothing is written if None

    Returns:
        Tuple of (result document, exit code)
    """
    args = build_parser(settings).parse_args(list(argv))
    inv = Invocation(args)
    writer = writer or documents.DocumentWriter()
    command = args.command
    logger.info(f"Starting {command}")
    started = time.perf_counter()

    try:
        if command in WRITING_HANDLERS:
            result = WRITING_HANDLERS[command](inv, writer)
        else:
            result = HANDLERS[command](inv)
        code = 0 if result.status == "ok" else VERIFY_FAILED
    except ToolkitError as e:
        logger.error(f"{command} failed: {e}", exc_info=True)
        result, code = _error_document(command, inv, e), e.exit_code
    except np.linalg.LinAlgError as e:
        logger.error(f"{command} failed in linear algebra: {e}", exc_info=True)
        detail = documents.ResultDocument(
            command=command,
            status="error",
            inputs_digest=documents.inputs_digest(inv.raw_inputs, inv.parameters()),
            error={"type": "NumericalFailure", "message": str(e)},
        )
        result, code = detail, 3

    elapsed = (time.perf_counter() - started) * 1000.0
    logger.info(f"Finished {command} with exit code {code} in {elapsed:.1f} ms")
    return result.model_copy(update={"elapsed_ms": elapsed}), code


def main(argv: Optional[Sequence[str]] = None, settings: Optional[Settings] = None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    # --out is needed before parsing to set up the writer
    parsed, _ = build_parser(settings).parse_known_args(argv)
    out = getattr(parsed, "out", None)
    writer = documents.DocumentWriter(out_path=out, stream=sys.stdout)
    result, code = run_command(argv, settings, writer)
    writer.write(result)
    return code
