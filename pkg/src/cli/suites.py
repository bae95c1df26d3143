"""Property suites run by `app.py verify`, one per acceptance criterion."""
import logging
import tempfile
from pathlib import Path
from typing import Callable, Dict, List, Tuple

import numpy as np
from pydantic import BaseModel, Field

from ..coherence.partial_coherence import (
    affinity_partial_coherence,
    fidelity_partial_coherence,
    partial_coherence,
    qsd_ensemble_of,
    skew_information_coherence,
)
from ..coherence.xstate import xstate_fidelity_pc
from ..correlations.correlated_coherence import (
    correlated_coherence,
    discord_estimate,
    gcc,
    pure_cc,
)
from ..linalg import kernels
from ..metrics.channels import apply_channel, branch_operators, contractibility_slack, subselect
from ..metrics.distances import affinity, distance, fidelity, operator_overlap, overlap
from ..models.data_models import BipartiteState, DistanceKind, Ensemble
from ..qsd.brute_force import scan_two_outcome
from ..qsd.discrimination import helstrom, lsm_error
from ..qsdstate.embedding import build_qsd_state, discrimination_bound_check, qsd_state_roundtrip
from ..states.generators import (
    luders_channel,
    random_bipartite,
    random_channel,
    random_density,
    random_ensemble,
    random_local_channel_b,
    random_partial_incoherent_channel,
    random_partial_incoherent_state,
    random_pure_state,
    random_unitary,
    random_xstate,
)
from ..states.structure import (
    bell_state,
    is_linearly_independent,
    is_partial_incoherent,
    product_state,
    pure_density,
    rebase,
)
from ..states.validators import validate_bipartite, validate_ensemble

logger = logging.getLogger("partial_coherence")

KINDS = (DistanceKind.FIDELITY, DistanceKind.AFFINITY)


class CheckResult(BaseModel):
    name: str
    criterion: int
    trials: int = 0
    failures: int = 0
    worst: float = 0.0

    @property
    def passed(self) -> bool:
        return self.failures == 0


class SuiteResult(BaseModel):
    suite: str
    criterion: int
    checks: List[CheckResult] = Field(default_factory=list)

    @property
    def passed(self) -> int:
        return sum(1 for c in self.checks if c.passed)

    @property
    def failed(self) -> int:
        return sum(1 for c in self.checks if not c.passed)

    @property
    def ok(self) -> bool:
        return self.failed == 0


class SuiteRecorder:
    """Accumulates named checks for one suite."""

    def __init__(self, suite: str, criterion: int):
        self.result = SuiteResult(suite=suite, criterion=criterion)
        self._checks: Dict[str, CheckResult] = {}

    def check(self, name: str, ok: bool, deviation: float = 0.0) -> None:
        entry = self._checks.get(name)
        if entry is None:
            entry = CheckResult(name=name, criterion=self.result.criterion)
            self._checks[name] = entry
            self.result.checks.append(entry)
        entry.trials += 1
        entry.worst = max(entry.worst, float(deviation))
        if not ok:
            entry.failures += 1
            logger.debug(f"[{self.result.criterion}] {name} failed (deviation {deviation:.3e})")


def _trial_rng(seed: int, trial: int) -> np.random.Generator:
    return np.random.default_rng([seed, trial])


def _sub(rng: np.random.Generator) -> int:
    return int(rng.integers(2**32))


def _rank(rng: np.random.Generator, dim: int) -> int:
    return int(rng.integers(1, dim + 1))


def _as_bipartite(rho, like: BipartiteState) -> BipartiteState:
    return validate_bipartite(rho, like.n_a, like.n_b, like.basis_a)


def metric_axioms(trials: int, seed: int) -> SuiteResult:
    rec = SuiteRecorder("metric-axioms", 1)
    for dim in (2, 3, 4, 6):
        for t in range(trials):
            rng = _trial_rng(seed, t * 10 + dim)
            rho = random_density(dim, _rank(rng, dim), _sub(rng))
            sigma = random_density(dim, _rank(rng, dim), _sub(rng))
            f, a = fidelity(rho, sigma), affinity(rho, sigma)
            rec.check("0 <= A <= F <= 1", -1e-9 <= a <= f + 1e-9 and f <= 1.0 + 1e-9, max(a - f, 0.0))
            for kind in KINDS:
                self_overlap = overlap(rho, rho, kind)
                rec.check(f"{kind.value}(rho, rho) = 1", self_overlap >= 1.0 - 1e-9, 1.0 - self_overlap)
                d = distance(rho, rho, kind)
                rec.check(f"d_{kind.value}(rho, rho) = 0", d <= 1e-9, d)
    return rec.result


def strong_contractibility(trials: int, seed: int) -> SuiteResult:
    rec = SuiteRecorder("strong-contractibility", 2)
    for t in range(trials):
        rng = _trial_rng(seed, t)
        rho = random_density(4, _rank(rng, 4), _sub(rng))
        sigma = random_density(4, _rank(rng, 4), _sub(rng))
        flavour = t % 3
        if flavour == 0:
            reference = rebase(random_bipartite(2, 2, _sub(rng)), random_unitary(2, _sub(rng)))
            channel, label = luders_channel(reference), "lueders"
        elif flavour == 1:
            channel, label = random_channel(4, 4, _sub(rng)), "4-kraus"
        else:
            channel, label = random_partial_incoherent_channel(2, 2, 3, _sub(rng)), "partial-incoherent"
        for kind in KINDS:
            for weights in ("rho", "sigma"):
                slack = contractibility_slack(rho, sigma, channel, kind, weights)
                rec.check(f"slack >= 0 ({kind.value}, {weights} weights, {label})", slack >= -1e-8, -slack)
    return rec.result


def metric_properties(trials: int, seed: int) -> SuiteResult:
    rec = SuiteRecorder("p1-p5", 3)
    for t in range(trials):
        rng = _trial_rng(seed, t)
        dim = int(rng.integers(2, 5))
        rho = random_density(dim, _rank(rng, dim), _sub(rng))
        sigma = random_density(dim, _rank(rng, dim), _sub(rng))
        channel = random_channel(dim, int(rng.integers(1, 4)), _sub(rng))
        psi, phi = random_pure_state(dim, _sub(rng)), random_pure_state(dim, _sub(rng))
        pure_psi, pure_phi = np.outer(psi, psi.conj()), np.outer(phi, phi.conj())

        for kind in KINDS:
            x = overlap(rho, sigma, kind)
            rec.check(f"P1 range ({kind.value})", 0.0 <= x <= 1.0)
            distinct = overlap(pure_psi, pure_phi, kind)
            rec.check(f"P1 distinct states ({kind.value})", distinct < 1.0 - 1e-6, distinct)

            for k in channel.operators:
                p_op = k @ rho.matrix @ kernels.dagger(k)
                q_op = k @ sigma.matrix @ kernels.dagger(k)
                p, q = float(np.real(np.trace(p_op))), float(np.real(np.trace(q_op)))
                if p < 1e-12 or q < 1e-12:
                    continue
                scaled = operator_overlap(p_op, q_op, kind) / np.sqrt(p * q)
                dev = abs(scaled - overlap(p_op / p, q_op / q, kind))
                rec.check(f"P2 scaling ({kind.value})", dev <= 1e-8, dev)

            after = overlap(apply_channel(rho, channel), apply_channel(sigma, channel), kind)
            rec.check(f"P3 monotone under channels ({kind.value})", after >= x - 1e-8, x - after)

            basis = random_unitary(dim, _sub(rng))
            cut = int(rng.integers(1, dim))
            projectors = [basis[:, :cut] @ kernels.dagger(basis[:, :cut]),
                          basis[:, cut:] @ kernels.dagger(basis[:, cut:])]
            pinched_rho = sum(pr @ rho.matrix @ pr for pr in projectors)
            pinched_sigma = sum(pr @ sigma.matrix @ pr for pr in projectors)
            whole = operator_overlap(pinched_rho, pinched_sigma, kind)
            parts = sum(
                operator_overlap(pr @ rho.matrix @ pr, pr @ sigma.matrix @ pr, kind) for pr in projectors
            )
            rec.check(f"P4 block additivity ({kind.value})", abs(whole - parts) <= 1e-8, abs(whole - parts))

            branch_sum = sum(
                operator_overlap(r, s, kind)
                for r, s in zip(branch_operators(rho, channel), branch_operators(sigma, channel))
            )
            rec.check(f"P5 subselection sum ({kind.value})", branch_sum >= x - 1e-8, x - branch_sum)

            asym = abs(distance(rho, sigma, kind) - distance(sigma, rho, kind))
            rec.check(f"symmetry ({kind.value})", asym <= 1e-10, asym)

        length = int(rng.integers(1, 11))
        probs = rng.dirichlet(np.ones(length))
        xs = rng.random(length)
        lhs, rhs = float(np.sum(xs ** 2 / probs)), float(np.sum(xs)) ** 2
        rec.check("sum x^2/p >= (sum x)^2", lhs >= rhs - 1e-12, rhs - lhs)
    return rec.result


def vn_equivalence(trials: int, seed: int) -> SuiteResult:
    rec = SuiteRecorder("vn-equivalence", 4)
    for t in range(trials):
        rng = _trial_rng(seed, t)
        n_b = 2 + t % 2
        state = random_bipartite(2, n_b, _sub(rng))
        report = fidelity_partial_coherence(state)
        task = qsd_ensemble_of(state)
        dev = abs(report.value - helstrom(task).error_prob)
        rec.check("equals Helstrom error of the reduced task", dev <= 1e-9, dev)
        brute = 1.0 - scan_two_outcome(task, samples=50, seed=_sub(rng), keep=3, refine="ascent")
        dev = abs(report.value - brute)
        rec.check("equals direct two-outcome vN search", dev <= 1e-6, dev)
        rec.check("cpis distance reproduces value",
                  abs(report.diagnostics["cpis_distance"] - report.value) <= 1e-7,
                  abs(report.diagnostics["cpis_distance"] - report.value))
    return rec.result


def affinity_closed_form(trials: int, seed: int, samples: int = 1000) -> SuiteResult:
    rec = SuiteRecorder("affinity", 5)
    shapes = [(2, 2), (2, 3), (3, 2)]
    for t in range(min(trials, 50)):
        rng = _trial_rng(seed, t)
        n_a, n_b = shapes[t % len(shapes)]
        state = random_bipartite(n_a, n_b, _sub(rng))
        report = affinity_partial_coherence(state)
        closest = min(
            distance(state.state, random_partial_incoherent_state(n_a, n_b, _sub(rng)).state, DistanceKind.AFFINITY)
            for _ in range(samples)
        )
        rec.check("value <= sampled partial-incoherent distances", report.value <= closest + 1e-8,
                  max(0.0, report.value - closest))
        dev = abs(distance(state.state, report.cpis, DistanceKind.AFFINITY) - report.value)
        rec.check("d_A(rho, cpis) = value", dev <= 1e-8, dev)
        dev = abs(skew_information_coherence(state) - report.value)
        rec.check("skew-information identity", dev <= 1e-9, dev)
    return rec.result


def xstate_closed_form(trials: int, seed: int) -> SuiteResult:
    rec = SuiteRecorder("xstate", 6)
    spot = np.diag([0.25, 0.25, 0.25, 0.25]).astype(complex)
    spot[0, 3] = spot[3, 0] = spot[1, 2] = spot[2, 1] = 0.125
    value = xstate_fidelity_pc(validate_bipartite(spot, 2, 2)).value
    expected = (1.0 - np.sqrt(3.0) / 2.0) / 2.0
    rec.check("spot value", abs(value - expected) <= 1e-9, abs(value - expected))
    for t in range(trials):
        rng = _trial_rng(seed, t)
        state = random_xstate(2 + t % 3, _sub(rng), full_rank=True)
        closed = xstate_fidelity_pc(state, require_invertible=True)
        generic = fidelity_partial_coherence(state)
        dev = abs(closed.value - generic.value)
        rec.check("closed form = Helstrom reduction", dev <= 1e-8, dev)
        dev = abs(distance(state.state, closed.cpis) - closed.value)
        rec.check("closed-form cpis reproduces value", dev <= 1e-7, dev)
    return rec.result


def _independent_binary(rng: np.random.Generator) -> Ensemble:
    dim = int(rng.integers(2, 5))
    first = int(rng.integers(1, dim))
    second = int(rng.integers(1, dim - first + 1))
    return random_ensemble(2, dim, _sub(rng), ranks=[first, second])


def qsd_state(trials: int, seed: int) -> SuiteResult:
    rec = SuiteRecorder("qsd-state", 7)
    for t in range(trials):
        rng = _trial_rng(seed, t)
        ensemble = random_ensemble(int(rng.integers(1, 5)), int(rng.integers(1, 5)), _sub(rng))
        state = build_qsd_state(ensemble)
        smallest = float(np.linalg.eigvalsh(state.matrix)[0])
        trace = float(np.real(np.trace(state.matrix)))
        rec.check("embedded state is a density matrix",
                  smallest >= -1e-9 and abs(trace - 1.0) <= 1e-10, max(-smallest, abs(trace - 1.0)))
        roundtrip = qsd_state_roundtrip(ensemble)
        rec.check("priors recovered", roundtrip.prior_defect <= 1e-9, roundtrip.prior_defect)
        rec.check("member spectra recovered", roundtrip.spectral_defect <= 1e-8, roundtrip.spectral_defect)

        binary = _independent_binary(rng)
        if is_linearly_independent(binary):
            check = discrimination_bound_check(binary)
            dev = abs(check.fidelity_coherence - check.reference_error)
            rec.check("fidelity coherence = Helstrom error (independent)", dev <= 1e-7, dev)

    zero, plus = np.diag([1.0, 0.0]), 0.5 * np.ones((2, 2))
    benchmark = discrimination_bound_check(validate_ensemble([0.5, 0.5], [zero, plus]))
    expected = (1.0 - 1.0 / np.sqrt(2.0)) / 2.0
    dev = abs(benchmark.fidelity_coherence - expected)
    rec.check("benchmark {|0>, |+>}", dev <= 1e-6, dev)
    return rec.result


def lsm_affinity(trials: int, seed: int) -> SuiteResult:
    rec = SuiteRecorder("lsm-affinity", 8)
    shapes = [(2, 2), (2, 3), (3, 2), (3, 3)]
    for t in range(trials):
        rng = _trial_rng(seed, t)
        n_a, n_b = shapes[t % len(shapes)]
        state = random_bipartite(n_a, n_b, _sub(rng), rank=_rank(rng, n_a * n_b))
        dev = abs(affinity_partial_coherence(state).value - lsm_error(qsd_ensemble_of(state)))
        rec.check("C_A(rho) = LSM error of the reduced task", dev <= 1e-8, dev)
        for _ in range(2):
            ensemble = random_ensemble(int(rng.integers(2, 5)), int(rng.integers(2, 5)), _sub(rng))
            dev = abs(lsm_error(ensemble) - affinity_partial_coherence(build_qsd_state(ensemble)).value)
            rec.check("LSM error = C_A of the embedded state", dev <= 1e-8, dev)
    return rec.result


def helstrom_brute_force(trials: int, seed: int, samples: int = 2000) -> SuiteResult:
    rec = SuiteRecorder("helstrom-brute-force", 9)
    for t in range(min(trials, 50)):
        rng = _trial_rng(seed, t)
        ensemble = random_ensemble(2, 2, _sub(rng))
        exact = helstrom(ensemble).success_prob
        brute = scan_two_outcome(ensemble, samples=samples, seed=_sub(rng))
        rec.check("Helstrom matches brute force", abs(exact - brute) <= 1e-4, abs(exact - brute))
        lam = ensemble.priors[0] * ensemble.states[0] - ensemble.priors[1] * ensemble.states[1]
        norm = kernels.trace_norm(lam)
        if norm > 2e-4:
            minus_form = 0.5 * (1.0 - norm)
            rec.check("minus-sign form disagrees with brute force", abs(minus_form - brute) > 1e-4,
                      abs(minus_form - brute))
    return rec.result


def _coherent_state(rng: np.random.Generator, n_a: int, n_b: int) -> BipartiteState:
    plus = np.full((n_a, n_a), 1.0 / n_a, dtype=complex)
    coherent = product_state(plus, random_density(n_b, None, _sub(rng)))
    free = random_partial_incoherent_state(n_a, n_b, _sub(rng))
    return validate_bipartite(0.5 * coherent.matrix + 0.5 * free.matrix, n_a, n_b)


def measure_axioms(trials: int, seed: int) -> SuiteResult:
    rec = SuiteRecorder("measure-axioms", 10)
    for t in range(trials):
        rng = _trial_rng(seed, t)
        for kind in KINDS:
            # the fidelity kind stays at n_a = 2 where the Helstrom route is exact
            n_a = 2 if kind is DistanceKind.FIDELITY else 2 + t % 2
            n_b = 2

            free = random_partial_incoherent_state(n_a, n_b, _sub(rng))
            value = partial_coherence(free, kind).value
            rec.check(f"C1 zero on free states ({kind.value})", value <= 1e-9, value)
            value = partial_coherence(_coherent_state(rng, n_a, n_b), kind).value
            rec.check(f"C1 positive on coherent states ({kind.value})", value >= 1e-6, value)

            state = random_bipartite(n_a, n_b, _sub(rng))
            before = partial_coherence(state, kind).value
            channel = random_partial_incoherent_channel(n_a, n_b, 3, _sub(rng))
            after = partial_coherence(_as_bipartite(apply_channel(state.state, channel), state), kind).value
            rec.check(f"C2 monotone ({kind.value})", after <= before + 1e-7, after - before)

            average = sum(
                p * partial_coherence(_as_bipartite(branch, state), kind).value
                for p, branch in subselect(state.state, channel) if branch is not None
            )
            rec.check(f"C3 strongly monotone ({kind.value})", average <= before + 1e-7, average - before)

            parts = [random_bipartite(n_a, n_b, _sub(rng)) for _ in range(3)]
            weights = rng.dirichlet(np.ones(3))
            mixture = validate_bipartite(sum(w * s.matrix for w, s in zip(weights, parts)), n_a, n_b)
            lhs = partial_coherence(mixture, kind).value
            rhs = sum(w * partial_coherence(s, kind).value for w, s in zip(weights, parts))
            rec.check(f"C4 convex ({kind.value})", lhs <= rhs + 1e-7, lhs - rhs)

        state = random_bipartite(2, 2, _sub(rng))
        fid = fidelity_partial_coherence(state)
        aff = affinity_partial_coherence(state)
        rec.check("C_F <= C_A", fid.value <= aff.value + 1e-9, fid.value - aff.value)
        rec.check("cpis is partial incoherent",
                  is_partial_incoherent(_as_bipartite(fid.cpis, state), 1e-8)
                  and is_partial_incoherent(_as_bipartite(aff.cpis, state), 1e-8))
    return rec.result


def _schmidt_vector(coefficients: np.ndarray, n_b: int) -> np.ndarray:
    n_a = len(coefficients)
    return sum(np.sqrt(c) * np.kron(np.eye(n_a)[:, i], np.eye(n_b)[:, i]) for i, c in enumerate(coefficients))


def _purification_of_maximally_mixed(rng: np.random.Generator, n_a: int, n_b: int) -> np.ndarray:
    isometry = random_unitary(n_b, _sub(rng))[:, :n_a]
    psi = sum(np.kron(np.eye(n_a)[:, i], isometry[:, i]) for i in range(n_a)) / np.sqrt(n_a)
    return np.kron(random_unitary(n_a, _sub(rng)), np.eye(n_b)) @ psi


def correlations(trials: int, seed: int, restarts: int = 2) -> SuiteResult:
    rec = SuiteRecorder("correlations", 11)
    shapes = {DistanceKind.FIDELITY: [(2, 2), (2, 3), (3, 2)], DistanceKind.AFFINITY: [(2, 2), (2, 3), (3, 3)]}
    for t in range(trials):
        rng = _trial_rng(seed, t)
        for kind in KINDS:
            n_a, n_b = shapes[kind][t % len(shapes[kind])]
            state = random_bipartite(n_a, n_b, _sub(rng), rank=_rank(rng, n_a * n_b))
            value = gcc(state, kind, restarts=5, seed=_sub(rng))
            rec.check(f"gcc >= 0 ({kind.value})", value >= -1e-7, -value)

            psi = random_pure_state(6, _sub(rng))
            pure = validate_bipartite(pure_density(psi), 2, 3)
            dev = abs(correlated_coherence(pure, kind).value - pure_cc(psi, 2, 3, kind))
            rec.check(f"cc matches pure closed form ({kind.value})", dev <= 1e-5, dev)

            u_a, u_b = random_unitary(2, _sub(rng)), random_unitary(2, _sub(rng))
            base = random_bipartite(2, 2, _sub(rng))
            local = np.kron(u_a, u_b)
            moved = validate_bipartite(local @ base.matrix @ kernels.dagger(local), 2, 2)
            dev = abs(correlated_coherence(moved, kind).value - correlated_coherence(base, kind).value)
            rec.check(f"cc local-unitary invariant ({kind.value})", dev <= 1e-5, dev)

            channel = random_local_channel_b(2, 2, 2, _sub(rng))
            after = correlated_coherence(_as_bipartite(apply_channel(base.state, channel), base), kind).value
            before = correlated_coherence(base, kind).value
            rec.check(f"cc monotone under b-side channels ({kind.value})", after <= before + 1e-5, after - before)

        lam = np.sort(rng.dirichlet(np.ones(3)))[::-1]
        mix = rng.uniform()
        mu = mix * lam + (1.0 - mix) * lam[rng.permutation(3)]
        more_ordered = pure_cc(_schmidt_vector(lam, 4), 3, 4, DistanceKind.AFFINITY)
        less_ordered = pure_cc(_schmidt_vector(mu, 4), 3, 4, DistanceKind.AFFINITY)
        rec.check("affinity pure cc monotone under majorization", more_ordered <= less_ordered + 1e-12,
                  more_ordered - less_ordered)

        product = product_state(random_density(2, None, _sub(rng)), random_density(3, None, _sub(rng)))
        value = gcc(product, DistanceKind.AFFINITY)
        rec.check("affinity gcc vanishes on products", abs(value) <= 1e-8, abs(value))

    for t in range(min(trials, 5)):
        rng = _trial_rng(seed, 10_000 + t)
        state = random_bipartite(2, 2, _sub(rng))
        for kind in KINDS:
            cc = correlated_coherence(state, kind, restarts, _sub(rng))
            disc = discord_estimate(state, kind, restarts, _sub(rng))
            rec.check(f"discord <= cc ({kind.value})", disc.value <= cc.value + 1e-12, disc.value - cc.value)

        n_b = 2 + t % 2
        psi = _purification_of_maximally_mixed(rng, 2, n_b)
        pure = validate_bipartite(pure_density(psi), 2, n_b)
        for kind in KINDS:
            cc = correlated_coherence(pure, kind, restarts, _sub(rng)).value
            disc = discord_estimate(pure, kind, restarts, _sub(rng)).value
            rec.check(f"discord = cc on purifications of I/n_a ({kind.value})", abs(cc - disc) <= 1e-5,
                      abs(cc - disc))

    bell = bell_state(2)
    for kind in KINDS:
        values = [
            partial_coherence(bell, kind).value,
            correlated_coherence(bell, kind, restarts).value,
            discord_estimate(bell, kind, restarts).value,
        ]
        dev = max(abs(v - 0.5) for v in values)
        rec.check(f"Bell state values ({kind.value})", dev <= 1e-6, dev)
    return rec.result


def cli_determinism(trials: int, seed: int) -> SuiteResult:
    # imported here because commands imports this module for `verify`
    from . import documents
    from .commands import run_command

    rec = SuiteRecorder("cli", 12)
    builders: List[Callable[[np.random.Generator], documents.StateDocument]] = [
        lambda r: documents.density_document(random_density(3, None, _sub(r))),
        lambda r: documents.bipartite_document(
            rebase(random_bipartite(2, 2, _sub(r)), random_unitary(2, _sub(r)))
        ),
        lambda r: documents.ensemble_document(random_ensemble(3, 2, _sub(r))),
        lambda r: documents.channel_document(random_channel(2, 3, _sub(r))),
        lambda r: documents.pure_document(random_pure_state(6, _sub(r)), 2, 3),
    ]
    for t in range(trials):
        rng = _trial_rng(seed, t)
        doc = builders[t % len(builders)](rng)
        text = documents.serialize(doc)
        again = documents.serialize(documents.parse_document(text.encode("utf-8")))
        rec.check("document round trip is byte-identical", text == again)

    with tempfile.TemporaryDirectory() as tmp:
        path = Path(tmp) / "state.json"
        state = random_bipartite(2, 2, seed)
        path.write_text(documents.serialize(documents.bipartite_document(state)), encoding="utf-8")
        for argv in (
            ["partial-coherence", "--kind", "fidelity", str(path)],
            ["partial-coherence", "--kind", "affinity", str(path)],
            ["cc", "--kind", "affinity", "--restarts", "2", "--seed", str(seed), str(path)],
        ):
            first, code_1 = run_command(argv)
            second, code_2 = run_command(argv)
            same = (
                code_1 == code_2 == 0
                and documents.serialize(first.model_copy(update={"elapsed_ms": 0.0}))
                == documents.serialize(second.model_copy(update={"elapsed_ms": 0.0}))
            )
            rec.check(f"deterministic `{argv[0]}`", same)
    return rec.result


SUITES: Dict[str, Tuple[int, Callable[[int, int], SuiteResult]]] = {
    "metric-axioms": (1, metric_axioms),
    "strong-contractibility": (2, strong_contractibility),
    "p1-p5": (3, metric_properties),
    "vn-equivalence": (4, vn_equivalence),
    "affinity": (5, affinity_closed_form),
    "xstate": (6, xstate_closed_form),
    "qsd-state": (7, qsd_state),
    "lsm-affinity": (8, lsm_affinity),
    "helstrom-brute-force": (9, helstrom_brute_force),
    "measure-axioms": (10, measure_axioms),
    "correlations": (11, correlations),
    "cli": (12, cli_determinism),
}


def run_suites(name: str, trials: int, seed: int) -> List[SuiteResult]:
    """
    Run one suite by name, or every suite for "all".

    Args:
        name: Suite name or "all"
        trials: Random instances per check
        seed: Base seed; trial t of a suite draws from default_rng([seed, t])

    Returns:
        One SuiteResult per suite, in registry order
    """
    names = list(SUITES) if name == "all" else [name]
    results = []
    for suite_name in names:
        criterion, runner = SUITES[suite_name]
        logger.info(f"Running suite {suite_name} (criterion {criterion}, {trials} trials)")
        result = runner(trials, seed)
        logger.info(f"Suite {suite_name}: {result.passed} check(s) passed, {result.failed} failed")
        results.append(result)
    return results
