"""
Simulated one-ancilla measurement scheme for S-matrix entries.

The ancilla is qubit Q of a (Q+1)-qubit register. Its |1> branch carries the
circuit with G_n inserted and its |0> branch the circuit with G_m inserted,
so a final Hadamard gives

    P(ancilla = 0) = (1 + Re<gamma_m, gamma_n>) / 2 = (1 + 4 S[m][n]) / 2

Shots are drawn from a binomial with the exact probability; error bars come
from a parametric bootstrap of every entry.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Union

import numpy as np

import settings
from errors import ConfigError, UnsupportedError
from schemas.reports import ClassificationReport, TolerancePolicy
from services.circuit_core.circuit import (
    ControlledGate,
    ControlledPauli,
    FrozenRotation,
    GateSpec,
    ParametricCircuit,
    ParametricRotation,
    SingleQubitGate,
)
from services.circuit_core.pauli import Generator, PauliString
from services.dea import (
    SMatrix,
    StepEigenvalues,
    check_sphere_bound,
    classify_parameters,
    default_tolerance,
    inductive_classification,
    s_matrix,
)
from services.simulator import Assignment, as_assignment, evolve, inner

logger = logging.getLogger(__name__)

DIAGONAL_ENTRY = 0.25
# stream tag for bootstrap replicas, distinct from the measurement stream
_BOOTSTRAP_STREAM = 1


@dataclass(frozen=True)
class OverlapEstimate:
    value: float
    shots: int
    p0_hat: float
    seed: int

    def __post_init__(self):
        if self.shots < 1:
            raise ConfigError("An overlap estimate needs at least one shot")


@dataclass(frozen=True)
class NoisySMatrix:
    """Shot-estimated S with bootstrap replicas of the full matrix."""

    mean: SMatrix
    replicas: np.ndarray = field(repr=False)
    shots: Optional[int]
    seed: Optional[int]

    @property
    def resamples(self) -> int:
        return int(self.replicas.shape[0])

    @property
    def stddev(self) -> np.ndarray:
        """Per-eigenvalue standard deviation over the replicas, ascending order."""
        if self.resamples < 2:
            return np.zeros(self.mean.size)
        return np.linalg.eigvalsh(self.replicas).std(axis=0, ddof=1)

    def restrict(self, positions: Sequence[int]) -> "NoisySMatrix":
        ix = np.asarray(positions, dtype=int)
        return NoisySMatrix(
            mean=self.mean.submatrix(ix),
            replicas=self.replicas[:, ix[:, None], ix[None, :]],
            shots=self.shots,
            seed=self.seed,
        )


# ==================== Circuit construction ====================

def _widen(p: PauliString) -> PauliString:
    return PauliString(p.letters + ("I",))


def _widen_generator(g: Generator) -> Generator:
    return Generator(tuple(_widen(t) for t in g.terms))


def _widen_gate(gate: GateSpec) -> GateSpec:
    if isinstance(gate, ParametricRotation):
        return ParametricRotation(_widen_generator(gate.generator), gate.param)
    if isinstance(gate, FrozenRotation):
        return FrozenRotation(_widen_generator(gate.generator), gate.angle, gate.frozen_from)
    if isinstance(gate, ControlledPauli):
        return ControlledPauli(_widen(gate.pauli), gate.control)
    if isinstance(gate, (SingleQubitGate, ControlledGate)):
        return gate
    raise TypeError(f"Unsupported gate {gate!r}")


def _single_string(c: ParametricCircuit, k: int) -> PauliString:
    rotation = c.rotation(k)
    if rotation.generator.num_terms != 1:
        raise UnsupportedError(
            f"Parameter '{rotation.param}' has a {rotation.generator.num_terms}-term generator; "
            "the one-ancilla scheme needs single Pauli strings",
            details={"param": rotation.param},
        )
    return rotation.generator.terms[0]


def hadamard_test_circuit(c: ParametricCircuit, m: int, n: int) -> ParametricCircuit:
    """(Q+1)-qubit circuit whose ancilla-zero probability is (1 + 4 S[m][n]) / 2."""
    g_m, g_n = _single_string(c, m), _single_string(c, n)
    ancilla = c.qubits
    param_m, param_n = c.parameters[m], c.parameters[n]
    flip = SingleQubitGate("x", ancilla)
    gates: List[GateSpec] = [SingleQubitGate("h", ancilla)]
    for gate in c.gates:
        gates.append(_widen_gate(gate))
        if isinstance(gate, ParametricRotation):
            if gate.param == param_n:
                gates.append(ControlledPauli(_widen(g_n), ancilla))
            if gate.param == param_m:
                gates.extend([flip, ControlledPauli(_widen(g_m), ancilla), flip])
    gates.extend([flip, SingleQubitGate("h", ancilla)])
    return ParametricCircuit(
        qubits=c.qubits + 1,
        gates=tuple(gates),
        init="0" + c.init,
        symmetry_params=c.symmetry_params,
    )


def ancilla_zero_probability(circuit: ParametricCircuit, theta: Assignment) -> float:
    """P(ancilla = 0) for a circuit whose ancilla is its most significant qubit."""
    amps = evolve(circuit, theta).amplitudes
    half = amps.size // 2
    return float(np.sum(np.abs(amps[:half]) ** 2))


# ==================== Sampling ====================

def _check_shots(shots: int) -> None:
    if shots is None or int(shots) < 1:
        raise ConfigError("shots must be a positive integer", details={"shots": shots})


def _sample(p0: float, shots: int, rng: np.random.Generator) -> float:
    return rng.binomial(shots, min(max(p0, 0.0), 1.0)) / shots


def estimate_overlap(
    c: ParametricCircuit,
    theta: Assignment,
    m: int,
    n: int,
    shots: int,
    seed: int,
) -> OverlapEstimate:
    """Estimate Re<gamma_m, gamma_n> from ``shots`` ancilla measurements."""
    _check_shots(shots)
    values = as_assignment(c, theta)
    p0 = ancilla_zero_probability(hadamard_test_circuit(c, m, n), values)
    p0_hat = _sample(p0, shots, np.random.default_rng([seed, m, n]))
    return OverlapEstimate(value=2.0 * p0_hat - 1.0, shots=shots, p0_hat=p0_hat, seed=seed)


def estimate_gram_entry(
    c: ParametricCircuit,
    theta_a: Assignment,
    theta_b: Assignment,
    shots: Optional[int],
    seed: Optional[Union[int, Sequence[int]]] = None,
) -> float:
    """Re<C(theta_a), C(theta_b)> with the statistics of a one-ancilla overlap test.

    ``shots=None`` returns the exact value.
    """
    overlap = inner(evolve(c, theta_a), evolve(c, theta_b)).real
    if shots is None:
        return overlap
    _check_shots(shots)
    if seed is None:
        raise ConfigError("A seed is required for shot sampling")
    p0_hat = _sample((1.0 + overlap) / 2.0, shots, np.random.default_rng(seed))
    return 2.0 * p0_hat - 1.0


def _estimate(
    c: ParametricCircuit,
    values: np.ndarray,
    k: int,
    shots: Optional[int],
    seed: Optional[int],
    resamples: int,
) -> NoisySMatrix:
    if shots is None:
        exact = s_matrix(c, values, range(k))
        return NoisySMatrix(mean=exact, replicas=exact.entries[None, :, :], shots=None, seed=seed)
    _check_shots(shots)
    if seed is None:
        raise ConfigError("A seed is required for shot sampling")
    for j in range(k):
        _single_string(c, j)
    mean = np.zeros((k, k))
    replicas = np.empty((resamples, k, k))
    for m in range(k):
        mean[m, m] = DIAGONAL_ENTRY
        replicas[:, m, m] = DIAGONAL_ENTRY
        for n in range(m + 1, k):
            estimate = estimate_overlap(c, values, m, n, shots, seed)
            mean[m, n] = mean[n, m] = estimate.value / 4.0
            rng = np.random.default_rng([seed, m, n, _BOOTSTRAP_STREAM])
            draws = rng.binomial(shots, estimate.p0_hat, size=resamples) / shots
            replicas[:, m, n] = replicas[:, n, m] = (2.0 * draws - 1.0) / 4.0
    return NoisySMatrix(mean=SMatrix(mean, tuple(range(k))), replicas=replicas, shots=shots, seed=seed)


def estimate_s_matrix(
    c: ParametricCircuit,
    theta: Assignment,
    k: int,
    shots: Optional[int],
    seed: Optional[int],
    resamples: int = settings.BOOTSTRAP_RESAMPLES,
) -> NoisySMatrix:
    """Shot estimate of S over the first ``k`` roster parameters.

    ``shots=None`` gives the exact matrix with zero spread.
    """
    values = as_assignment(c, theta)
    if not 1 <= k <= c.num_parameters:
        raise ConfigError(f"k must lie in [1, {c.num_parameters}]", details={"k": k})
    if resamples < 2:
        raise ConfigError("At least two bootstrap resamples are required")
    return _estimate(c, values, k, shots, seed, resamples)


def _noisy_step(noisy: NoisySMatrix, z_threshold: float, tol: TolerancePolicy):
    def decide(positions: List[int]) -> StepEigenvalues:
        step = noisy.restrict(positions)
        eigs = step.mean.eigenvalues()
        std = step.stddev
        return StepEigenvalues(
            lambda_min=float(eigs[0]),
            lambda_second=float(eigs[1]) if eigs.size > 1 else None,
            invertible=bool(eigs[0] > max(z_threshold * std[0], tol.threshold(float(eigs[-1])))),
            lambda_min_std=float(std[0]),
            lambda_second_std=float(std[1]) if std.size > 1 else None,
        )

    return decide


def classify_with_noise(
    c: ParametricCircuit,
    theta: Assignment,
    shots: Optional[int],
    seed: Optional[int],
    z_threshold: float = settings.Z_THRESHOLD,
    *,
    resamples: int = settings.BOOTSTRAP_RESAMPLES,
    cap: Optional[int] = None,
    tol: Optional[TolerancePolicy] = None,
) -> ClassificationReport:
    """Inductive classification where a step is invertible when
    lambda_min > z_threshold * stddev(lambda_min).

    The numerical tolerance still applies as a floor, so an estimate that
    is exactly singular (all shots agree) is never called invertible.
    Only a supplied ``cap`` ends the walk early; every other step is
    decided from its own estimated eigenvalues.
    """
    if shots is None:
        return classify_parameters(c, theta, tol, cap, seed=seed)
    noisy = estimate_s_matrix(c, theta, c.num_parameters, shots, seed, resamples)
    decide = _noisy_step(noisy, z_threshold, tol or default_tolerance())
    verdicts = inductive_classification(c.parameters, decide, cap)
    report = ClassificationReport(
        parameters=verdicts,
        cap=cap,
        theta=as_assignment(c, theta).tolist(),
        seed=seed,
        shots=shots,
        z_threshold=z_threshold,
        **({"tolerance": tol} if tol is not None else {}),
    )
    check_sphere_bound(c, report)
    logger.info(
        "%d of %d parameters independent at %d shots", report.num_independent, c.num_parameters, shots
    )
    return report


def eigenvalue_table(
    c: ParametricCircuit,
    theta: Assignment,
    shots: Optional[int],
    seed: Optional[int],
    resamples: int = settings.BOOTSTRAP_RESAMPLES,
) -> List[Dict[str, object]]:
    """Rows (k, lambda_min, lambda_second and their spreads) for the leading
    k x k blocks of S, k >= 2."""
    noisy = estimate_s_matrix(c, theta, c.num_parameters, shots, seed, resamples)
    rows: List[Dict[str, object]] = []
    for k in range(2, c.num_parameters + 1):
        block = noisy.restrict(range(k))
        eigs, std = block.mean.eigenvalues(), block.stddev
        rows.append({
            "k": k,
            "lambda_min": float(eigs[0]),
            "lambda_min_std": float(std[0]),
            "lambda_second": float(eigs[1]),
            "lambda_second_std": float(std[1]),
            "shots": "exact" if shots is None else shots,
            "seed": "" if seed is None else seed,
        })
    return rows


def eigenvalue_sweep(
    c: ParametricCircuit,
    theta: Assignment,
    seed: int,
    shot_counts: Sequence[int] = settings.SHOT_PRESETS,
    resamples: int = settings.BOOTSTRAP_RESAMPLES,
) -> List[Dict[str, object]]:
    """``eigenvalue_table`` rows for each shot count, all from the same seed."""
    rows: List[Dict[str, object]] = []
    for shots in shot_counts:
        rows.extend(eigenvalue_table(c, theta, shots, seed, resamples))
    return rows
