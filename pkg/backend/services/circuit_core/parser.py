"""
Circuit description format: parsing and serialization.

The document is checked structurally against ``schemas/circuit.schema.json``
and then semantically while the domain objects are built (qubit ranges,
parameter uniqueness, symmetry parameter references).
"""

import json
import logging
import math
from pathlib import Path
from typing import Any, Dict, Union

from jsonschema import Draft202012Validator
from jsonschema.exceptions import ValidationError

from errors import CircuitParseError, CircuitValidationError
from schemas.documents import circuit_schema
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

logger = logging.getLogger(__name__)

_AXIS = {"rx": "X", "ry": "Y", "rz": "Z"}
_AXIS_TYPE = {letter: kind for kind, letter in _AXIS.items()}


def _validate_document(doc: Any) -> None:
    try:
        Draft202012Validator(circuit_schema()).validate(doc)
    except ValidationError as e:
        location = "/".join(str(p) for p in e.absolute_path) or "<root>"
        raise CircuitParseError(
            f"Invalid circuit document at {location}: {e.message}",
            details={"path": list(e.absolute_path)},
        ) from e


def _check_qubit(q: int, num_qubits: int, position: int) -> None:
    if q >= num_qubits:
        raise CircuitValidationError(
            f"Gate {position} uses qubit {q}, outside [0, {num_qubits - 1}]",
            details={"gate": position, "qubit": q},
        )


def _check_word(word: str, num_qubits: int, position: int) -> None:
    if len(word) != num_qubits:
        raise CircuitValidationError(
            f"Gate {position}: Pauli word '{word}' must have length {num_qubits}",
            details={"gate": position, "word": word},
        )


def _rotation(generator: Generator, raw: Dict[str, Any]) -> GateSpec:
    if "param" in raw:
        return ParametricRotation(generator=generator, param=raw["param"])
    angle = float(raw["angle"])
    if not math.isfinite(angle):
        raise CircuitValidationError("Frozen rotation angle must be finite")
    return FrozenRotation(generator=generator, angle=angle, frozen_from=raw.get("frozen_from"))


def _build_gate(raw: Dict[str, Any], num_qubits: int, position: int) -> GateSpec:
    kind = raw["type"]
    if kind in _AXIS:
        _check_qubit(raw["qubit"], num_qubits, position)
        return _rotation(Generator.single(num_qubits, raw["qubit"], _AXIS[kind]), raw)
    if kind == "rp":
        for word in raw["strings"]:
            _check_word(word, num_qubits, position)
        return _rotation(Generator.from_texts(raw["strings"]), raw)
    if kind in ("h", "x", "y", "z"):
        _check_qubit(raw["qubit"], num_qubits, position)
        return SingleQubitGate(kind=kind, qubit=raw["qubit"])
    if kind in ("cnot", "cz"):
        _check_qubit(raw["control"], num_qubits, position)
        _check_qubit(raw["target"], num_qubits, position)
        return ControlledGate(kind=kind, control=raw["control"], target=raw["target"])
    if kind == "cpauli":
        _check_word(raw["pauli"], num_qubits, position)
        _check_qubit(raw["control"], num_qubits, position)
        return ControlledPauli(pauli=PauliString.from_text(raw["pauli"]), control=raw["control"])
    raise CircuitParseError(f"Unknown gate type '{kind}'", details={"gate": position})


def circuit_from_dict(doc: Dict[str, Any]) -> ParametricCircuit:
    _validate_document(doc)
    num_qubits = doc["qubits"]
    gates = [_build_gate(raw, num_qubits, i) for i, raw in enumerate(doc["gates"])]
    circuit = ParametricCircuit(
        qubits=num_qubits,
        gates=tuple(gates),
        init=doc.get("init"),
        symmetry_params=tuple(doc.get("symmetry_params", ())),
    )
    logger.debug(
        "Parsed circuit: %d qubit(s), %d gate(s), roster %s",
        circuit.qubits, len(circuit.gates), circuit.parameters,
    )
    return circuit


def parse_circuit(text: Union[str, bytes]) -> ParametricCircuit:
    """Parse a circuit description document (JSON text)."""
    try:
        doc = json.loads(text)
    except (json.JSONDecodeError, UnicodeDecodeError) as e:
        raise CircuitParseError(f"Circuit document is not valid JSON: {e}") from e
    return circuit_from_dict(doc)


def load_circuit(path: Union[str, Path]) -> ParametricCircuit:
    circuit_path = Path(path)
    if not circuit_path.exists():
        raise CircuitParseError(f"Circuit file not found: {circuit_path}")
    return parse_circuit(circuit_path.read_text(encoding="utf-8"))


def _rotation_fields(generator: Generator) -> Dict[str, Any]:
    if generator.num_terms == 1 and len(generator.terms[0].support) == 1:
        term = generator.terms[0]
        qubit = term.support[0]
        return {"type": _AXIS_TYPE[term.letters[qubit]], "qubit": qubit}
    return {"type": "rp", "strings": generator.texts()}


def _gate_to_dict(gate: GateSpec) -> Dict[str, Any]:
    if isinstance(gate, ParametricRotation):
        return {**_rotation_fields(gate.generator), "param": gate.param}
    if isinstance(gate, FrozenRotation):
        out = {**_rotation_fields(gate.generator), "angle": gate.angle}
        if gate.frozen_from:
            out["frozen_from"] = gate.frozen_from
        return out
    if isinstance(gate, SingleQubitGate):
        return {"type": gate.kind, "qubit": gate.qubit}
    if isinstance(gate, ControlledGate):
        return {"type": gate.kind, "control": gate.control, "target": gate.target}
    if isinstance(gate, ControlledPauli):
        return {"type": "cpauli", "pauli": gate.pauli.text, "control": gate.control}
    raise TypeError(f"Unsupported gate {gate!r}")


def dump_circuit(circuit: ParametricCircuit) -> Dict[str, Any]:
    doc: Dict[str, Any] = {
        "qubits": circuit.qubits,
        "init": circuit.init,
        "gates": [_gate_to_dict(g) for g in circuit.gates],
    }
    if circuit.symmetry_params:
        doc["symmetry_params"] = list(circuit.symmetry_params)
    return doc


def dumps_circuit(circuit: ParametricCircuit) -> str:
    return json.dumps(dump_circuit(circuit), indent=2) + "\n"
