"""
Exact statevector simulator.

Amplitude index i = sum_q b_q 2^q, so qubit 0 is the least significant bit.
Parametric gates are R_G(theta) = exp(-i theta G / 2) with G a sum of Pauli
strings. Derivative states use the gate-insertion identity

    d_k C(theta) = -(i/2) * (C with G_k inserted right after R_{G_k}) |init>
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Dict, Mapping, Optional, Sequence, Union

import numpy as np

from errors import CircuitValidationError, ParameterAssignmentError
from services.circuit_core.circuit import (
    ControlledGate,
    ControlledPauli,
    FrozenRotation,
    GateSpec,
    ParametricCircuit,
    ParametricRotation,
    SingleQubitGate,
)
from services.circuit_core.pauli import Generator, PauliString, basis_indices

logger = logging.getLogger(__name__)

TWO_PI = 2.0 * math.pi
# Target bound on the truncated Taylor remainder of exp(-i angle G / 2)
TAYLOR_TOLERANCE = 1e-13
# Largest ||angle G / 2|| bound handled by a single Taylor step
TAYLOR_STEP_NORM = 0.5
NON_GENERIC_MARGIN = 1e-3

_HADAMARD = np.array([[1, 1], [1, -1]], dtype=complex) / math.sqrt(2)

Assignment = Union[Sequence[float], np.ndarray, Mapping[str, float]]


@dataclass(frozen=True)
class StateVector:
    amplitudes: np.ndarray
    qubits: int

    def __post_init__(self):
        amps = np.asarray(self.amplitudes, dtype=complex)
        if amps.ndim != 1 or amps.size != 2 ** self.qubits:
            raise CircuitValidationError(
                f"State on {self.qubits} qubit(s) needs {2 ** self.qubits} amplitudes, got {amps.size}"
            )
        amps = amps.copy()
        amps.setflags(write=False)
        object.__setattr__(self, "amplitudes", amps)

    @classmethod
    def basis(cls, bits: str) -> "StateVector":
        amps = np.zeros(2 ** len(bits), dtype=complex)
        amps[int(bits, 2)] = 1.0
        return cls(amps, len(bits))

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def realified(self) -> np.ndarray:
        """Real vector (Re psi, Im psi) of length 2^(Q+1)."""
        return np.concatenate([self.amplitudes.real, self.amplitudes.imag])

    def __len__(self) -> int:
        return self.amplitudes.size


# ==================== Parameter assignments ====================

def as_assignment(circuit: ParametricCircuit, theta: Assignment) -> np.ndarray:
    """Validate theta against the circuit roster and return it as an array."""
    if isinstance(theta, Mapping):
        missing = [p for p in circuit.parameters if p not in theta]
        extra = [p for p in theta if p not in circuit.parameters]
        if missing or extra:
            raise ParameterAssignmentError(
                "Parameter names do not match the circuit roster",
                details={"missing": missing, "unexpected": extra},
            )
        values = np.array([theta[p] for p in circuit.parameters], dtype=float)
    else:
        values = np.asarray(theta, dtype=float).reshape(-1)
    if values.size != circuit.num_parameters:
        raise ParameterAssignmentError(
            f"Expected {circuit.num_parameters} parameter value(s), got {values.size}",
            details={"roster": list(circuit.parameters)},
        )
    if not np.all(np.isfinite(values)):
        raise ParameterAssignmentError("Parameter values must be finite")
    return values


def random_assignment(
    num_parameters: int,
    seed: Optional[int] = None,
    *,
    rng: Optional[np.random.Generator] = None,
    margin: float = NON_GENERIC_MARGIN,
) -> np.ndarray:
    """Uniform draw from [0, 2pi)^N, avoiding a ``margin`` neighbourhood of
    0, pi and 2pi in every coordinate."""
    rng = rng if rng is not None else np.random.default_rng(seed)
    theta = rng.uniform(0.0, TWO_PI, size=num_parameters)
    while True:
        bad = np.min(np.abs(theta[:, None] - np.array([0.0, math.pi, TWO_PI])), axis=1) < margin
        if not bad.any():
            return theta
        theta[bad] = rng.uniform(0.0, TWO_PI, size=int(bad.sum()))


# ==================== Gate application ====================

def _apply_single_qubit(state: np.ndarray, matrix: np.ndarray, qubit: int, n: int) -> np.ndarray:
    # C-order reshape puts qubit n-1 on axis 0
    axis = n - 1 - qubit
    tensor = np.moveaxis(state.reshape([2] * n), axis, 0)
    tensor = np.tensordot(matrix, tensor, axes=([1], [0]))
    return np.moveaxis(tensor, 0, axis).reshape(-1)


def apply_controlled_pauli(state: np.ndarray, pauli: PauliString, control: int) -> np.ndarray:
    flipped = pauli.apply(state)
    active = ((basis_indices(state.size) >> control) & 1).astype(bool)
    return np.where(active, flipped, state)


def _exp_commuting(state: np.ndarray, generator: Generator, angle: float) -> np.ndarray:
    c, s = math.cos(angle / 2), math.sin(angle / 2)
    for term in generator.terms:
        state = c * state - 1j * s * term.apply(state)
    return state


def _taylor_order(step_norm: float, tolerance: float) -> int:
    # remainder of the exponential series is below x^(K+1)/(K+1)! * e^x
    order, term = 0, 1.0
    while True:
        order += 1
        term *= step_norm / order
        if term * step_norm / (order + 1) * math.exp(step_norm) < tolerance:
            return order


def _exp_taylor(state: np.ndarray, generator: Generator, angle: float) -> np.ndarray:
    bound = generator.num_terms * abs(angle) / 2
    steps = max(1, math.ceil(bound / TAYLOR_STEP_NORM))
    step_angle = angle / steps
    order = _taylor_order(bound / steps, TAYLOR_TOLERANCE / steps)
    factor = -0.5j * step_angle
    for _ in range(steps):
        term = state
        acc = state.copy()
        for j in range(1, order + 1):
            term = generator.apply(term) * (factor / j)
            acc = acc + term
        state = acc
    return state


def exp_pauli_sum(state: np.ndarray, generator: Generator, angle: float, *, method: str = "auto") -> np.ndarray:
    """exp(-i angle G / 2) applied to a raw amplitude array."""
    if method == "auto":
        method = "commuting" if generator.commuting else "taylor"
    if method == "commuting":
        if not generator.commuting:
            raise CircuitValidationError("Generator terms do not commute")
        return _exp_commuting(state, generator, angle)
    if method == "taylor":
        return _exp_taylor(state, generator, angle)
    raise ValueError(f"Unknown exponential method '{method}'")


def apply_pauli_sum_exponential(s: StateVector, g: Generator, angle: float) -> StateVector:
    if g.num_qubits != s.qubits:
        raise CircuitValidationError(
            f"Generator acts on {g.num_qubits} qubit(s) but the state has {s.qubits}"
        )
    return StateVector(exp_pauli_sum(s.amplitudes, g, angle), s.qubits)


def apply_gate(state: np.ndarray, gate: GateSpec, n: int, angle: Optional[float] = None) -> np.ndarray:
    if isinstance(gate, ParametricRotation):
        return exp_pauli_sum(state, gate.generator, angle)
    if isinstance(gate, FrozenRotation):
        return exp_pauli_sum(state, gate.generator, gate.angle)
    if isinstance(gate, SingleQubitGate):
        if gate.kind == "h":
            return _apply_single_qubit(state, _HADAMARD, gate.qubit, n)
        return PauliString.from_ops(n, {gate.qubit: gate.kind.upper()}).apply(state)
    if isinstance(gate, ControlledGate):
        letter = "X" if gate.kind == "cnot" else "Z"
        return apply_controlled_pauli(state, PauliString.from_ops(n, {gate.target: letter}), gate.control)
    if isinstance(gate, ControlledPauli):
        return apply_controlled_pauli(state, gate.pauli, gate.control)
    raise TypeError(f"Unsupported gate {gate!r}")


def _initial_amplitudes(circuit: ParametricCircuit) -> np.ndarray:
    state = np.zeros(2 ** circuit.qubits, dtype=complex)
    state[circuit.init_index] = 1.0
    return state


def _run(circuit: ParametricCircuit, values: np.ndarray, insert_after: Optional[int] = None) -> np.ndarray:
    angles: Dict[str, float] = dict(zip(circuit.parameters, values))
    insert_position = None
    if insert_after is not None:
        insert_position = circuit.gate_positions[circuit.parameters[insert_after]]
    state = _initial_amplitudes(circuit)
    for position, gate in enumerate(circuit.gates):
        angle = angles.get(gate.param) if isinstance(gate, ParametricRotation) else None
        state = apply_gate(state, gate, circuit.qubits, angle)
        if position == insert_position:
            state = gate.generator.apply(state)
    return state


# ==================== Public operations ====================

def evolve(c: ParametricCircuit, theta: Assignment) -> StateVector:
    """C(theta): init state, then every gate in list order."""
    values = as_assignment(c, theta)
    return StateVector(_run(c, values), c.qubits)


def derivative_state(c: ParametricCircuit, theta: Assignment, k: int) -> StateVector:
    """d_k C(theta) for roster index k (0-based)."""
    values = as_assignment(c, theta)
    if not 0 <= k < c.num_parameters:
        raise ParameterAssignmentError(
            f"Parameter index {k} out of range for {c.num_parameters} parameter(s)"
        )
    return StateVector(-0.5j * _run(c, values, insert_after=k), c.qubits)


def inner(a: StateVector, b: StateVector) -> complex:
    """<a|b>, conjugate-linear in ``a``."""
    if len(a) != len(b):
        raise CircuitValidationError(
            f"Cannot take inner product of states of dimension {len(a)} and {len(b)}"
        )
    return complex(np.vdot(a.amplitudes, b.amplitudes))


def translate_state_vector(state: StateVector) -> StateVector:
    """Apply the translation operator tau_Q (qubit q -> q+1 mod Q) to a state."""
    n = state.qubits
    indices = basis_indices(2 ** n)
    top = (indices >> (n - 1)) & 1
    shifted = ((indices << 1) & ((1 << n) - 1)) | top
    out = np.empty_like(state.amplitudes)
    out[shifted] = state.amplitudes
    return StateVector(out, n)
