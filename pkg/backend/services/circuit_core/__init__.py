"""
Pauli algebra, gates, circuits and the circuit description format
"""

from .pauli import Generator, PauliString, pauli_commute, translate_string
from .circuit import (
    ControlledGate,
    ControlledPauli,
    FrozenRotation,
    GateSpec,
    ParametricCircuit,
    ParametricRotation,
    SingleQubitGate,
)
from .parser import circuit_from_dict, dump_circuit, dumps_circuit, load_circuit, parse_circuit

__all__ = [
    "Generator",
    "PauliString",
    "pauli_commute",
    "translate_string",
    "ControlledGate",
    "ControlledPauli",
    "FrozenRotation",
    "GateSpec",
    "ParametricCircuit",
    "ParametricRotation",
    "SingleQubitGate",
    "circuit_from_dict",
    "dump_circuit",
    "dumps_circuit",
    "load_circuit",
    "parse_circuit",
]
