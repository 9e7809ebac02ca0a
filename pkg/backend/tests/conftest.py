import json

import numpy as np
import pytest

from services.circuit_core import (
    ControlledGate,
    Generator,
    ParametricCircuit,
    ParametricRotation,
    SingleQubitGate,
    circuit_from_dict,
)

# fixed generic analysis point, no coordinate near 0 or pi
GENERIC_THETA = [0.9, 1.7, 2.3, 4.0]


def rotation(kind, qubit, param):
    return {"type": kind, "qubit": qubit, "param": param}


@pytest.fixture
def rz_rx_doc():
    """R_Z(t2) R_X(t1) |0>"""
    return {"qubits": 1, "gates": [rotation("rx", 0, "t1"), rotation("rz", 0, "t2")]}


@pytest.fixture
def rz_rx(rz_rx_doc):
    return circuit_from_dict(rz_rx_doc)


@pytest.fixture
def rx_rx():
    """R_X(t2) R_X(t1) |0>: the second parameter repeats the first."""
    return circuit_from_dict({"qubits": 1, "gates": [rotation("rx", 0, "t1"), rotation("rx", 0, "t2")]})


@pytest.fixture
def rx_only():
    return circuit_from_dict({"qubits": 1, "gates": [rotation("rx", 0, "t")]})


@pytest.fixture
def four_rotations():
    """R_Y(t4) R_Z(t3) R_X(t2) R_Z(t1) |0>: three independent, t4 redundant."""
    return circuit_from_dict({
        "qubits": 1,
        "gates": [
            rotation("rz", 0, "t1"),
            rotation("rx", 0, "t2"),
            rotation("rz", 0, "t3"),
            rotation("ry", 0, "t4"),
        ],
    })


@pytest.fixture
def symmetry_doc():
    """R_Y(t3) R_Z(t2) R_X(t1) R_Z(phi) |0> with phi an unwanted global phase."""
    return {
        "qubits": 1,
        "symmetry_params": ["phi"],
        "gates": [
            rotation("rz", 0, "phi"),
            rotation("rx", 0, "t1"),
            rotation("rz", 0, "t2"),
            rotation("ry", 0, "t3"),
        ],
    }


@pytest.fixture
def symmetry_circuit(symmetry_doc):
    return circuit_from_dict(symmetry_doc)


@pytest.fixture
def two_qubit_circuit():
    return circuit_from_dict({
        "qubits": 2,
        "gates": [
            rotation("ry", 0, "a"),
            rotation("rx", 1, "b"),
            {"type": "cnot", "control": 0, "target": 1},
            {"type": "rp", "strings": ["ZX"], "param": "c"},
            {"type": "h", "qubit": 1},
            rotation("rz", 1, "d"),
            {"type": "cz", "control": 1, "target": 0},
            rotation("ry", 0, "e"),
        ],
    })


def random_single_string_circuit(rng: np.random.Generator, qubits: int, depth: int) -> ParametricCircuit:
    """Random circuit of single-string rotations mixed with fixed gates."""
    gates = []
    for i in range(depth):
        roll = rng.integers(4)
        if roll == 0 and qubits > 1:
            control, target = rng.choice(qubits, size=2, replace=False)
            gates.append(ControlledGate(str(rng.choice(["cnot", "cz"])), int(control), int(target)))
        elif roll == 1:
            gates.append(SingleQubitGate(str(rng.choice(["h", "x", "z"])), int(rng.integers(qubits))))
        else:
            letters = rng.choice(list("IXYZ"), size=qubits)
            if set(letters) == {"I"}:
                letters[rng.integers(qubits)] = "X"
            gates.append(ParametricRotation(Generator.from_texts(["".join(letters)]), f"p{i}"))
    if not any(isinstance(g, ParametricRotation) for g in gates):
        gates.append(ParametricRotation(Generator.single(qubits, 0, "Y"), "last"))
    return ParametricCircuit(qubits=qubits, gates=tuple(gates))


@pytest.fixture
def write_json(tmp_path):
    def _write(name, payload):
        path = tmp_path / name
        path.write_text(json.dumps(payload), encoding="utf-8")
        return path

    return _write
