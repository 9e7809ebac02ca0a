"""
Gate and circuit domain types.

Circuits are immutable. The parameter roster lists the symmetry (phi)
parameters first, in declared order, followed by the remaining parameters in
order of first appearance in the gate list.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from functools import cached_property
from typing import Dict, Optional, Tuple, Union

from errors import CircuitValidationError
from services.circuit_core.pauli import Generator, PauliString

SINGLE_QUBIT_GATES = ("h", "x", "y", "z")
TWO_QUBIT_GATES = ("cnot", "cz")


@dataclass(frozen=True)
class SingleQubitGate:
    kind: str
    qubit: int

    def qubits(self) -> Tuple[int, ...]:
        return (self.qubit,)


@dataclass(frozen=True)
class ControlledGate:
    """CNOT or CZ."""

    kind: str
    control: int
    target: int

    def qubits(self) -> Tuple[int, ...]:
        return (self.control, self.target)


@dataclass(frozen=True)
class ControlledPauli:
    """Pauli string applied when ``control`` is |1>. The string spans the whole
    register and must be I on the control qubit."""

    pauli: PauliString
    control: int

    def qubits(self) -> Tuple[int, ...]:
        return self.pauli.support + (self.control,)


@dataclass(frozen=True)
class ParametricRotation:
    """R_G(theta) = exp(-i theta G / 2) with a free parameter."""

    generator: Generator
    param: str

    def qubits(self) -> Tuple[int, ...]:
        return tuple(sorted({q for t in self.generator.terms for q in t.support}))


@dataclass(frozen=True)
class FrozenRotation:
    """R_G(angle) with the angle fixed; ``frozen_from`` keeps the name of the
    parameter it replaced, if any."""

    generator: Generator
    angle: float
    frozen_from: Optional[str] = None

    def qubits(self) -> Tuple[int, ...]:
        return tuple(sorted({q for t in self.generator.terms for q in t.support}))


GateSpec = Union[SingleQubitGate, ControlledGate, ControlledPauli, ParametricRotation, FrozenRotation]
FixedGate = Union[SingleQubitGate, ControlledGate, ControlledPauli, FrozenRotation]


@dataclass(frozen=True)
class ParametricCircuit:
    qubits: int
    gates: Tuple[GateSpec, ...]
    init: Optional[str] = None
    symmetry_params: Tuple[str, ...] = field(default_factory=tuple)

    def __post_init__(self):
        if self.qubits < 1:
            raise CircuitValidationError("Circuit needs at least one qubit")
        if self.init is None:
            object.__setattr__(self, "init", "0" * self.qubits)
        if len(self.init) != self.qubits or set(self.init) - {"0", "1"}:
            raise CircuitValidationError(
                f"init must be a bitstring of length {self.qubits}",
                details={"init": self.init},
            )
        object.__setattr__(self, "gates", tuple(self.gates))
        object.__setattr__(self, "symmetry_params", tuple(self.symmetry_params))
        self._validate_gates()

    def _validate_gates(self) -> None:
        seen: Dict[str, int] = {}
        for position, gate in enumerate(self.gates):
            for q in gate.qubits():
                if not 0 <= q < self.qubits:
                    raise CircuitValidationError(
                        f"Gate {position} uses qubit {q}, outside [0, {self.qubits - 1}]",
                        details={"gate": position, "qubit": q},
                    )
            if isinstance(gate, ControlledGate) and gate.control == gate.target:
                raise CircuitValidationError(
                    f"Gate {position}: control and target are both qubit {gate.control}",
                    details={"gate": position},
                )
            if isinstance(gate, ControlledPauli):
                if gate.pauli.num_qubits != self.qubits:
                    raise CircuitValidationError(
                        f"Gate {position}: Pauli word length must be {self.qubits}",
                        details={"gate": position},
                    )
                if gate.pauli.letters[gate.control] != "I":
                    raise CircuitValidationError(
                        f"Gate {position}: Pauli word acts on its own control qubit",
                        details={"gate": position},
                    )
            if isinstance(gate, (ParametricRotation, FrozenRotation)):
                if gate.generator.num_qubits != self.qubits:
                    raise CircuitValidationError(
                        f"Gate {position}: Pauli words must have length {self.qubits}",
                        details={"gate": position},
                    )
            if isinstance(gate, ParametricRotation):
                if gate.param in seen:
                    raise CircuitValidationError(
                        f"Parameter '{gate.param}' is used by gates {seen[gate.param]} and {position}",
                        details={"param": gate.param},
                    )
                seen[gate.param] = position
        unknown = [name for name in self.symmetry_params if name not in seen]
        if unknown:
            raise CircuitValidationError(
                f"Unknown symmetry parameter(s): {', '.join(unknown)}",
                details={"symmetry_params": unknown},
            )
        if len(set(self.symmetry_params)) != len(self.symmetry_params):
            raise CircuitValidationError("symmetry_params lists a parameter twice")

    @cached_property
    def parameters(self) -> Tuple[str, ...]:
        in_order = [g.param for g in self.gates if isinstance(g, ParametricRotation)]
        rest = [name for name in in_order if name not in self.symmetry_params]
        return tuple(self.symmetry_params) + tuple(rest)

    @property
    def num_parameters(self) -> int:
        return len(self.parameters)

    @cached_property
    def gate_positions(self) -> Dict[str, int]:
        """Parameter name -> index of its rotation in ``gates``."""
        return {
            g.param: i for i, g in enumerate(self.gates) if isinstance(g, ParametricRotation)
        }

    def parameter_index(self, name: str) -> int:
        try:
            return self.parameters.index(name)
        except ValueError:
            raise CircuitValidationError(f"Unknown parameter '{name}'") from None

    def rotation(self, k: int) -> ParametricRotation:
        """Rotation gate carrying roster parameter k (0-based)."""
        if not 0 <= k < self.num_parameters:
            raise CircuitValidationError(
                f"Parameter index {k} out of range for {self.num_parameters} parameter(s)"
            )
        return self.gates[self.gate_positions[self.parameters[k]]]

    @property
    def init_index(self) -> int:
        return int(self.init, 2)

    def with_gates(self, gates, symmetry_params=None) -> "ParametricCircuit":
        return replace(
            self,
            gates=tuple(gates),
            symmetry_params=self.symmetry_params if symmetry_params is None else tuple(symmetry_params),
        )
