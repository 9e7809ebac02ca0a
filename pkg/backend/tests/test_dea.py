import math

import numpy as np
import pytest

from conftest import GENERIC_THETA
from errors import NumericalError, ParameterAssignmentError, SymmetryError
from schemas.config import FreezePolicy
from schemas.reports import ClassificationReport, ParameterVerdict, TolerancePolicy, Verdict
from services.circuit_core import FrozenRotation, ParametricRotation
from services.dea import (
    SMatrix,
    StepEigenvalues,
    check_sphere_bound,
    classify_parameters,
    classify_repeated,
    freeze_parameters,
    inductive_classification,
    remove_symmetry,
    rref_classification,
    s_matrix,
    smallest_two_eigenvalues,
    sphere_dimension,
)
from services.simulator import random_assignment

IND, RED = Verdict.INDEPENDENT, Verdict.REDUNDANT


def test_worked_example_matrices_at_random_points(rz_rx, rx_rx):
    rng = np.random.default_rng(20)
    for _ in range(20):
        theta = random_assignment(2, rng=rng)
        np.testing.assert_allclose(s_matrix(rz_rx, theta).entries, np.diag([0.25, 0.25]), atol=1e-12)
        np.testing.assert_allclose(s_matrix(rx_rx, theta).entries, np.full((2, 2), 0.25), atol=1e-12)
        assert classify_parameters(rz_rx, theta).verdicts() == [IND, IND]
        assert classify_parameters(rx_rx, theta).verdicts() == [IND, RED]


def test_single_string_diagonal_is_a_quarter(two_qubit_circuit):
    theta = random_assignment(two_qubit_circuit.num_parameters, seed=4)
    s = s_matrix(two_qubit_circuit, theta)
    np.testing.assert_allclose(np.diag(s.entries), 0.25, atol=1e-12)
    np.testing.assert_allclose(s.entries, s.entries.T, atol=1e-14)
    assert s.eigenvalues()[0] > -1e-12


def test_subset_follows_requested_order(four_rotations):
    full = s_matrix(four_rotations, GENERIC_THETA)
    sub = s_matrix(four_rotations, GENERIC_THETA, subset=[2, 0])
    assert sub.indices == (2, 0)
    np.testing.assert_allclose(sub.entries, full.entries[np.ix_([2, 0], [2, 0])], atol=1e-14)


@pytest.mark.parametrize("subset", [[0, 0], [5], [-1]], ids=["duplicate", "too-large", "negative"])
def test_bad_subset(four_rotations, subset):
    with pytest.raises(ParameterAssignmentError):
        s_matrix(four_rotations, GENERIC_THETA, subset=subset)


def test_smatrix_rejects_asymmetric_entries():
    with pytest.raises(NumericalError):
        SMatrix(np.array([[1.0, 0.5], [0.0, 1.0]]), (0, 1))


def test_smatrix_psd_check():
    s = SMatrix(np.array([[0.25, 0.5], [0.5, 0.25]]), (0, 1))
    with pytest.raises(NumericalError):
        s.check_psd()


def test_smallest_two_eigenvalues():
    assert smallest_two_eigenvalues(np.array([[2.0]])) == (2.0, None)
    lam_min, lam_second = smallest_two_eigenvalues(np.diag([3.0, 1.0, 2.0]))
    assert (lam_min, lam_second) == pytest.approx((1.0, 2.0))


@pytest.mark.parametrize("theta", [[0.3, 0.8], [2.0, 5.5], [4.4, 1.1]])
def test_rz_rx_both_independent(rz_rx, theta):
    report = classify_parameters(rz_rx, theta)
    assert report.verdicts() == [IND, IND]


def test_repeated_rotation_is_redundant(rx_rx):
    report = classify_parameters(rx_rx, [0.7, 2.1])
    assert report.verdicts() == [IND, RED]
    assert report.parameters[1].lambda_min == pytest.approx(0.0, abs=1e-12)
    assert report.parameters[1].lambda_second == pytest.approx(0.5)
    assert not report.parameters[1].skipped


def test_fourth_rotation_on_one_qubit_is_redundant(four_rotations):
    report = classify_parameters(four_rotations, GENERIC_THETA)
    assert report.verdicts() == [IND, IND, IND, RED]
    assert report.independent_indices() == [0, 1, 2]
    assert report.theta == GENERIC_THETA


def test_first_parameter_always_independent(two_qubit_circuit):
    theta = random_assignment(two_qubit_circuit.num_parameters, seed=11)
    report = classify_parameters(two_qubit_circuit, theta)
    assert report.parameters[0].verdict == IND
    assert report.parameters[0].lambda_min == pytest.approx(0.25)
    assert report.parameters[0].lambda_second is None


def test_every_step_is_evaluated_without_a_cap(four_rotations):
    assert sphere_dimension(four_rotations) == 3
    report = classify_parameters(four_rotations, GENERIC_THETA)
    last = report.parameters[3]
    assert not last.skipped
    assert last.lambda_min == pytest.approx(0.0, abs=1e-12)
    assert last.lambda_second > 0
    assert report.num_independent == sphere_dimension(four_rotations)
    assert report.cap is None


def test_counts_above_the_sphere_dimension_are_logged(four_rotations, caplog):
    verdicts = [ParameterVerdict(name=n, verdict=IND) for n in four_rotations.parameters]
    report = ClassificationReport(parameters=verdicts)
    with caplog.at_level("WARNING", logger="services.dea"):
        check_sphere_bound(four_rotations, report)
    assert "exceed the sphere dimension 3" in caplog.text


def test_user_cap_skips_the_tail(four_rotations):
    report = classify_parameters(four_rotations, GENERIC_THETA, cap=2)
    assert report.verdicts() == [IND, IND, RED, RED]
    assert [p.skipped for p in report.parameters] == [False, False, True, True]
    assert report.cap == 2


def test_inductive_walk_uses_growing_sets():
    seen = []

    def decide(positions):
        seen.append(list(positions))
        return StepEigenvalues(lambda_min=1.0, lambda_second=None, invertible=positions[-1] != 1)

    verdicts = inductive_classification(["a", "b", "c"], decide)
    assert [v.verdict for v in verdicts] == [IND, RED, IND]
    assert seen == [[0], [0, 1], [0, 2]]


def test_tolerance_changes_the_verdict(rx_rx):
    # a very large absolute tolerance turns every step into a redundancy
    report = classify_parameters(rx_rx, [0.7, 2.1], tol=TolerancePolicy(abs_tol=1.0, rel_tol=0.0))
    assert report.verdicts() == [RED, RED]


@pytest.mark.parametrize("seed", range(5))
def test_rref_pivots_agree_with_inductive_walk(two_qubit_circuit, four_rotations, seed):
    for circuit in (two_qubit_circuit, four_rotations):
        theta = random_assignment(circuit.num_parameters, seed=seed)
        s = s_matrix(circuit, theta)
        report = classify_parameters(circuit, theta)
        assert list(rref_classification(s)) == report.independent_indices()


def test_rref_on_empty_matrix():
    assert rref_classification(SMatrix(np.zeros((0, 0)), ())) == ()


def test_symmetry_parameter_is_classified_first(symmetry_circuit):
    report = classify_parameters(symmetry_circuit, GENERIC_THETA)
    assert [p.name for p in report.parameters] == ["phi", "t1", "t2", "t3"]
    assert report.verdicts() == [IND, IND, IND, RED]


def test_remove_symmetry_with_zero_freeze(symmetry_circuit):
    reduced, report = remove_symmetry(symmetry_circuit, [0.0], GENERIC_THETA, freeze=FreezePolicy.ZERO)
    assert reduced.parameters == ("t1", "t2")
    assert reduced.symmetry_params == ()
    # both removed rotations become the identity and are dropped
    assert all(isinstance(g, ParametricRotation) for g in reduced.gates)
    assert len(reduced.gates) == 2
    assert report.verdicts() == [IND, IND, IND, RED]


def test_remove_symmetry_with_value_freeze(symmetry_circuit):
    reduced, _ = remove_symmetry(symmetry_circuit, [0.0], GENERIC_THETA)
    frozen = [g for g in reduced.gates if isinstance(g, FrozenRotation)]
    assert len(frozen) == 1
    assert frozen[0].frozen_from == "t3"
    assert frozen[0].angle == pytest.approx(GENERIC_THETA[3])
    assert reduced.parameters == ("t1", "t2")


def test_reduced_circuit_is_fully_independent(symmetry_circuit):
    reduced, _ = remove_symmetry(symmetry_circuit, [0.5], GENERIC_THETA)
    report = classify_parameters(reduced, GENERIC_THETA[1:3])
    assert report.verdicts() == [IND, IND]


def test_reduced_circuit_verdicts_hold_at_random_points(symmetry_circuit):
    reduced, _ = remove_symmetry(symmetry_circuit, [0.5], GENERIC_THETA)
    result = classify_repeated(reduced, trials=10, seed=31)
    assert result.consistent
    assert len({tuple(r.theta) for r in result.reports}) == 10
    assert all(r.verdicts() == [IND, IND] for r in result.reports)


def test_nonzero_phi0_is_kept_as_frozen_rotation(symmetry_circuit):
    reduced, _ = remove_symmetry(symmetry_circuit, [0.5], GENERIC_THETA, freeze=FreezePolicy.ZERO)
    frozen = [g for g in reduced.gates if isinstance(g, FrozenRotation)]
    assert [(g.frozen_from, g.angle) for g in frozen] == [("phi", 0.5)]


def test_full_turn_of_a_commuting_rotation_is_dropped(rz_rx):
    reduced = freeze_parameters(rz_rx, {"t2": 4 * math.pi})
    assert reduced.parameters == ("t1",)
    assert len(reduced.gates) == 1


def test_remove_symmetry_needs_symmetry_params(rz_rx):
    with pytest.raises(SymmetryError):
        remove_symmetry(rz_rx, [], [0.3, 0.8])


def test_remove_symmetry_checks_phi0_length(symmetry_circuit):
    with pytest.raises(SymmetryError):
        remove_symmetry(symmetry_circuit, [0.0, 1.0], GENERIC_THETA)


def test_repeated_classification_is_consistent(four_rotations):
    result = classify_repeated(four_rotations, trials=4, seed=1)
    assert result.consistent
    assert len(result.reports) == 4
    assert all(r.verdicts() == [IND, IND, IND, RED] for r in result.reports)
    thetas = {tuple(r.theta) for r in result.reports}
    assert len(thetas) == 4


def test_repeated_classification_needs_a_trial(four_rotations):
    with pytest.raises(ParameterAssignmentError):
        classify_repeated(four_rotations, trials=0, seed=1)
