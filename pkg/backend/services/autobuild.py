"""
Construction of minimal, maximally expressive circuits for the omega = 1
translational sector.

The plan is R_{Z,Q} followed, for every nonzero equivalence class in order of
(weight, canonical representative), by R_{X^B} and R_{(X|Y)^B}. Every
generator is a full tau-orbit of Pauli words, so the circuit commutes with
translation.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import List, Optional, Tuple

import numpy as np

from errors import UnsupportedError
from schemas.reports import VerificationReport, VerificationTrial
from services.circuit_core.circuit import ParametricCircuit, ParametricRotation
from services.circuit_core.pauli import Generator, PauliString, translate_string
from services.dea import classify_parameters
from services.sectors import equivalence_classes, sector_dimension, translate_state
from services.simulator import evolve, random_assignment, translate_state_vector

logger = logging.getLogger(__name__)

MAX_PLAN_QUBITS = 16
MAX_BUILD_QUBITS = 10
TRANSLATION_TOLERANCE = 1e-10


@dataclass(frozen=True)
class CanonicalRep:
    """Representative with B_0 = 1 and B_{Q-1} = 0 (all-ones stands for itself).
    ``B`` is written with qubit Q-1 leftmost."""

    B: str
    weight: int
    class_order: int

    @property
    def value(self) -> int:
        return int(self.B, 2)


@dataclass(frozen=True)
class SectorCircuitPlan:
    qubits: int
    gates: Tuple[Tuple[str, Generator], ...]

    @property
    def num_parameters(self) -> int:
        return len(self.gates)


def _orbit(bits: str) -> List[str]:
    orbit = [bits]
    for _ in range(len(bits) - 1):
        orbit.append(translate_state(orbit[-1]))
    return orbit


def _string_orbit(p: PauliString) -> Tuple[PauliString, ...]:
    orbit = [p]
    for _ in range(p.num_qubits - 1):
        orbit.append(translate_string(orbit[-1]))
    return tuple(orbit)


def _canonical_member(members: Tuple[str, ...]) -> str:
    if set(members[0]) == {"1"}:
        return members[0]
    admissible = [b for b in members if b[-1] == "1" and b[0] == "0"]
    return min(admissible, key=lambda b: int(b, 2))


def canonical_representatives(Q: int) -> List[CanonicalRep]:
    if not 1 <= Q <= MAX_PLAN_QUBITS:
        raise UnsupportedError(f"Q must lie in [1, {MAX_PLAN_QUBITS}]", details={"Q": Q})
    reps = [
        CanonicalRep(B=_canonical_member(cls.members), weight=cls.weight, class_order=cls.order)
        for cls in equivalence_classes(Q)
        if cls.weight > 0
    ]
    reps.sort(key=lambda r: (r.weight, r.value))
    return reps


def _word(bits: str, letter_of_one: str) -> str:
    return "".join(letter_of_one if b == "1" else "I" for b in bits)


def build_x_gate(rep: CanonicalRep) -> Generator:
    members = _orbit(rep.B)[: rep.class_order]
    return Generator(tuple(PauliString.from_text(_word(b, "X")) for b in members))


def build_xy_gate(rep: CanonicalRep) -> Generator:
    """Y on the lowest-index 1-bit of B, X on the others, then every tau-shift.

    The single Y makes all Q shifts distinct.
    """
    word = list(_word(rep.B, "X"))
    lowest = len(word) - 1 - rep.B[::-1].index("1")
    word[lowest] = "Y"
    return Generator(_string_orbit(PauliString.from_text("".join(word))))


def build_z_gate(Q: int) -> Generator:
    if Q < 1:
        raise UnsupportedError("Q must be at least 1")
    return Generator(tuple(PauliString.from_ops(Q, {q: "Z"}) for q in range(Q)))


def plan_sector_circuit(Q: int) -> SectorCircuitPlan:
    gates: List[Tuple[str, Generator]] = [("z", build_z_gate(Q))]
    for rep in canonical_representatives(Q):
        gates.append((f"x{rep.B}", build_x_gate(rep)))
        gates.append((f"xy{rep.B}", build_xy_gate(rep)))
    return SectorCircuitPlan(qubits=Q, gates=tuple(gates))


def build_sector_circuit(Q: int) -> ParametricCircuit:
    if not 1 <= Q <= MAX_BUILD_QUBITS:
        raise UnsupportedError(f"Q must lie in [1, {MAX_BUILD_QUBITS}]", details={"Q": Q})
    plan = plan_sector_circuit(Q)
    circuit = ParametricCircuit(
        qubits=Q,
        gates=tuple(ParametricRotation(generator, name) for name, generator in plan.gates),
    )
    logger.info("Built sector circuit for Q=%d with %d parameters", Q, circuit.num_parameters)
    return circuit


def _trial(c: ParametricCircuit, label: str, theta: np.ndarray, cap: int) -> VerificationTrial:
    report = classify_parameters(c, theta, cap=cap)
    state = evolve(c, theta)
    error = float(np.linalg.norm(translate_state_vector(state).amplitudes - state.amplitudes))
    passed = report.num_independent == c.num_parameters and error < TRANSLATION_TOLERANCE
    if not passed:
        logger.warning("Trial %s failed: %d independent, translation error %.2e", label, report.num_independent, error)
    return VerificationTrial(
        label=label,
        theta=theta.tolist(),
        independent=report.num_independent,
        translation_error=error,
        passed=passed,
    )


def verify_sector_circuit(
    c: ParametricCircuit,
    Q: int,
    trials: int = 5,
    seed: Optional[int] = None,
) -> VerificationReport:
    """DEA at theta = 0 and at ``trials`` random points, plus a translation check at each."""
    cap = sector_dimension(Q, 1)
    results = [_trial(c, "zero", np.zeros(c.num_parameters), cap)]
    rng = np.random.default_rng(seed)
    for i in range(trials):
        results.append(_trial(c, f"random-{i}", random_assignment(c.num_parameters, rng=rng), cap))
    return VerificationReport(
        qubits=Q,
        parameters=c.num_parameters,
        cap=cap,
        seed=seed,
        trials=results,
        passed=all(t.passed for t in results),
    )
