"""
Dimensional expressivity analysis.

S-matrix assembly from derivative states, the inductive classifier, the
reduced-row-echelon cross-check and removal of unwanted symmetries.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Callable, List, Optional, Sequence, Tuple, Union

import numpy as np

import settings
from errors import NumericalError, ParameterAssignmentError, SymmetryError
from schemas.config import FreezePolicy
from schemas.reports import (
    ClassificationReport,
    ParameterVerdict,
    RepeatedClassification,
    TolerancePolicy,
    Verdict,
)
from services.circuit_core.circuit import FrozenRotation, ParametricCircuit, ParametricRotation
from services.simulator import (
    TWO_PI,
    Assignment,
    as_assignment,
    derivative_state,
    inner,
    random_assignment,
)

logger = logging.getLogger(__name__)

SYMMETRY_TOLERANCE = 1e-12
PSD_TOLERANCE = 1e-10
# R_G(4 pi k) is the identity for commuting Pauli generators
IDENTITY_PERIOD = 2.0 * TWO_PI


def default_tolerance() -> TolerancePolicy:
    return TolerancePolicy(abs_tol=settings.TOL_ABS, rel_tol=settings.TOL_REL)


@dataclass(frozen=True)
class SMatrix:
    """S[m][n] = Re<d_m C, d_n C> over the roster indices in ``indices``."""

    entries: np.ndarray
    indices: Tuple[int, ...]

    def __post_init__(self):
        entries = np.array(self.entries, dtype=float)
        if entries.ndim != 2 or entries.shape[0] != entries.shape[1]:
            raise NumericalError("S matrix must be square", details={"shape": list(entries.shape)})
        if entries.shape[0] != len(self.indices):
            raise NumericalError("S matrix size does not match its index set")
        if entries.size and np.max(np.abs(entries - entries.T)) > SYMMETRY_TOLERANCE:
            raise NumericalError("S matrix is not symmetric")
        entries.setflags(write=False)
        object.__setattr__(self, "entries", entries)
        object.__setattr__(self, "indices", tuple(int(i) for i in self.indices))

    @property
    def size(self) -> int:
        return len(self.indices)

    def eigenvalues(self) -> np.ndarray:
        return np.linalg.eigvalsh(self.entries)

    def check_psd(self) -> None:
        if self.size and self.eigenvalues()[0] < -PSD_TOLERANCE:
            raise NumericalError(
                "S matrix is not positive semidefinite",
                details={"lambda_min": float(self.eigenvalues()[0])},
            )

    def submatrix(self, positions: Sequence[int]) -> "SMatrix":
        """Restriction to the given positions of this matrix (not roster indices)."""
        ix = np.asarray(positions, dtype=int)
        return SMatrix(self.entries[np.ix_(ix, ix)], tuple(self.indices[i] for i in ix))


@dataclass(frozen=True)
class StepEigenvalues:
    lambda_min: float
    lambda_second: Optional[float]
    invertible: bool
    lambda_min_std: Optional[float] = None
    lambda_second_std: Optional[float] = None


StepDecision = Callable[[List[int]], StepEigenvalues]


def _check_subset(c: ParametricCircuit, subset: Sequence[int]) -> Tuple[int, ...]:
    subset = tuple(int(k) for k in subset)
    bad = [k for k in subset if not 0 <= k < c.num_parameters]
    if bad:
        raise ParameterAssignmentError(
            f"Parameter indices out of range: {bad}",
            details={"num_parameters": c.num_parameters},
        )
    if len(set(subset)) != len(subset):
        raise ParameterAssignmentError("Parameter subset contains duplicates", details={"subset": list(subset)})
    return subset


def s_matrix(c: ParametricCircuit, theta: Assignment, subset: Optional[Sequence[int]] = None) -> SMatrix:
    """Assemble S over ``subset`` (all parameters when omitted) from derivative states."""
    values = as_assignment(c, theta)
    subset = _check_subset(c, range(c.num_parameters) if subset is None else subset)
    states = [derivative_state(c, values, k) for k in subset]
    size = len(states)
    entries = np.zeros((size, size))
    for m in range(size):
        for n in range(m, size):
            entries[m, n] = entries[n, m] = inner(states[m], states[n]).real
    matrix = SMatrix(entries, subset)
    matrix.check_psd()
    return matrix


def smallest_two_eigenvalues(s: Union[SMatrix, np.ndarray]) -> Tuple[float, Optional[float]]:
    entries = s.entries if isinstance(s, SMatrix) else np.asarray(s, dtype=float)
    if entries.shape[0] < 1:
        raise NumericalError("Eigenvalues of an empty S matrix are undefined")
    eigs = np.linalg.eigvalsh(entries)
    return float(eigs[0]), (float(eigs[1]) if eigs.size > 1 else None)


def exact_step(s: SMatrix, tol: TolerancePolicy) -> StepDecision:
    """Invertibility test lambda_min > max(abs, rel * lambda_max) on S restricted to a step."""

    def decide(positions: List[int]) -> StepEigenvalues:
        eigs = s.submatrix(positions).eigenvalues()
        lam_min = float(eigs[0])
        return StepEigenvalues(
            lambda_min=lam_min,
            lambda_second=float(eigs[1]) if eigs.size > 1 else None,
            invertible=lam_min > tol.threshold(float(eigs[-1])),
        )

    return decide


def inductive_classification(
    names: Sequence[str],
    decide: StepDecision,
    cap: Optional[int] = None,
) -> List[ParameterVerdict]:
    """Walk the roster, keeping a parameter when S over (independent + it) is invertible."""
    independent: List[int] = []
    verdicts: List[ParameterVerdict] = []
    for k, name in enumerate(names):
        if cap is not None and len(independent) >= cap:
            verdicts.append(ParameterVerdict(name=name, verdict=Verdict.REDUNDANT, skipped=True))
            continue
        step = decide(independent + [k])
        logger.debug(
            "step %d (%s): lambda_min=%.3e lambda_second=%s invertible=%s",
            k, name, step.lambda_min, step.lambda_second, step.invertible,
        )
        if step.invertible:
            independent.append(k)
        verdicts.append(
            ParameterVerdict(
                name=name,
                verdict=Verdict.INDEPENDENT if step.invertible else Verdict.REDUNDANT,
                lambda_min=step.lambda_min,
                lambda_second=step.lambda_second,
                lambda_min_std=step.lambda_min_std,
                lambda_second_std=step.lambda_second_std,
            )
        )
    return verdicts


def sphere_dimension(c: ParametricCircuit) -> int:
    """Real dimension of the unit sphere in C^(2^Q)."""
    return 2 ** (c.qubits + 1) - 1


def check_sphere_bound(c: ParametricCircuit, report: ClassificationReport) -> None:
    # an exact S never exceeds the bound; shot estimates can
    if report.num_independent > sphere_dimension(c):
        logger.warning(
            "%d independent parameters exceed the sphere dimension %d",
            report.num_independent, sphere_dimension(c),
        )


def classify_parameters(
    c: ParametricCircuit,
    theta: Assignment,
    tol: Optional[TolerancePolicy] = None,
    cap: Optional[int] = None,
    *,
    seed: Optional[int] = None,
) -> ClassificationReport:
    tol = tol or default_tolerance()
    values = as_assignment(c, theta)
    s = s_matrix(c, values)
    verdicts = inductive_classification(c.parameters, exact_step(s, tol), cap)
    report = ClassificationReport(
        parameters=verdicts, cap=cap, tolerance=tol, theta=values.tolist(), seed=seed
    )
    check_sphere_bound(c, report)
    logger.info("%d of %d parameters independent", report.num_independent, c.num_parameters)
    return report


def rref_classification(s: SMatrix, tol: Optional[TolerancePolicy] = None) -> Tuple[int, ...]:
    """Pivot columns of the reduced row echelon form of S, as roster indices."""
    tol = tol or default_tolerance()
    a = np.array(s.entries, dtype=float)
    if a.size == 0:
        return ()
    threshold = tol.threshold(float(np.max(np.abs(a))))
    rows, cols = a.shape
    pivots: List[int] = []
    r = 0
    for col in range(cols):
        if r >= rows:
            break
        best = r + int(np.argmax(np.abs(a[r:, col])))
        if abs(a[best, col]) <= threshold:
            a[r:, col] = 0.0
            continue
        a[[r, best]] = a[[best, r]]
        a[r] /= a[r, col]
        others = np.arange(rows) != r
        a[others] -= np.outer(a[others, col], a[r])
        pivots.append(col)
        r += 1
    return tuple(s.indices[p] for p in pivots)


def _frozen_gate(gate: ParametricRotation, angle: float, policy: FreezePolicy) -> Optional[FrozenRotation]:
    angle = 0.0 if policy == FreezePolicy.ZERO else float(angle)
    turns = angle / IDENTITY_PERIOD
    if gate.generator.commuting and math.isclose(turns, round(turns), abs_tol=1e-12):
        return None
    return FrozenRotation(generator=gate.generator, angle=angle, frozen_from=gate.param)


def freeze_parameters(
    c: ParametricCircuit,
    frozen: dict,
    policy: FreezePolicy = FreezePolicy.VALUE,
    symmetry_values: Optional[dict] = None,
) -> ParametricCircuit:
    """Replace rotations of the named parameters with fixed-angle rotations.

    ``frozen`` maps parameter name to value and follows ``policy``;
    ``symmetry_values`` are always frozen at the given value.
    """
    symmetry_values = symmetry_values or {}
    gates = []
    for gate in c.gates:
        if isinstance(gate, ParametricRotation) and gate.param in symmetry_values:
            gate = _frozen_gate(gate, symmetry_values[gate.param], FreezePolicy.VALUE)
        elif isinstance(gate, ParametricRotation) and gate.param in frozen:
            gate = _frozen_gate(gate, frozen[gate.param], policy)
        if gate is not None:
            gates.append(gate)
    remaining = tuple(p for p in c.symmetry_params if p not in symmetry_values and p not in frozen)
    return c.with_gates(gates, symmetry_params=remaining)


def remove_symmetry(
    c: ParametricCircuit,
    phi0: Sequence[float],
    theta: Assignment,
    *,
    tol: Optional[TolerancePolicy] = None,
    freeze: FreezePolicy = FreezePolicy.VALUE,
    seed: Optional[int] = None,
) -> Tuple[ParametricCircuit, ClassificationReport]:
    """Classify with the symmetry parameters first, freeze redundant
    parameters and set every symmetry parameter to ``phi0``.

    ``theta`` is the analysis point over the full roster (symmetry
    parameters included).
    """
    if not c.symmetry_params:
        raise SymmetryError("Circuit declares no symmetry_params; nothing to remove")
    phi0 = [float(v) for v in phi0]
    if len(phi0) != len(c.symmetry_params):
        raise SymmetryError(
            f"Expected {len(c.symmetry_params)} symmetry value(s), got {len(phi0)}",
            details={"symmetry_params": list(c.symmetry_params)},
        )
    report = classify_parameters(c, theta, tol, seed=seed)
    values = dict(zip(c.parameters, report.theta))
    redundant = {
        p.name: values[p.name]
        for p in report.parameters
        if p.verdict == Verdict.REDUNDANT and p.name not in c.symmetry_params
    }
    reduced = freeze_parameters(c, redundant, freeze, dict(zip(c.symmetry_params, phi0)))
    logger.info(
        "Removed %d symmetry and %d redundant parameter(s); %d remain",
        len(phi0), len(redundant), reduced.num_parameters,
    )
    return reduced, report


def classify_repeated(
    c: ParametricCircuit,
    trials: int,
    seed: int,
    tol: Optional[TolerancePolicy] = None,
    cap: Optional[int] = None,
) -> RepeatedClassification:
    """Classify at ``trials`` random points drawn from one seeded stream."""
    if trials < 1:
        raise ParameterAssignmentError("At least one trial is required")
    rng = np.random.default_rng(seed)
    reports = [
        classify_parameters(c, random_assignment(c.num_parameters, rng=rng), tol, cap, seed=seed)
        for _ in range(trials)
    ]
    patterns = {tuple(r.verdicts()) for r in reports}
    if len(patterns) > 1:
        logger.warning("Verdicts differ across %d random points", trials)
    return RepeatedClassification(reports=reports, consistent=len(patterns) == 1)
