import numpy as np
import pytest

import settings
from conftest import GENERIC_THETA, random_single_string_circuit
from errors import ConfigError, UnsupportedError
from schemas.reports import Verdict
from services.circuit_core import circuit_from_dict
from services.dea import s_matrix
from services.shot_protocol import (
    ancilla_zero_probability,
    classify_with_noise,
    eigenvalue_sweep,
    eigenvalue_table,
    estimate_gram_entry,
    estimate_overlap,
    estimate_s_matrix,
    hadamard_test_circuit,
)
from services.simulator import evolve, inner, random_assignment

IND, RED = Verdict.INDEPENDENT, Verdict.REDUNDANT


@pytest.mark.parametrize("seed", range(10))
def test_ancilla_probability_encodes_s_entries(seed):
    rng = np.random.default_rng(100 + seed)
    c = random_single_string_circuit(rng, qubits=1 + seed % 4, depth=12)
    theta = random_assignment(c.num_parameters, rng=rng)
    s = s_matrix(c, theta).entries
    for m in range(c.num_parameters):
        for n in range(c.num_parameters):
            p0 = ancilla_zero_probability(hadamard_test_circuit(c, m, n), theta)
            assert p0 == pytest.approx((1 + 4 * s[m, n]) / 2, abs=1e-12)


def test_hadamard_circuit_adds_one_qubit(two_qubit_circuit):
    hc = hadamard_test_circuit(two_qubit_circuit, 0, 2)
    assert hc.qubits == 3
    assert hc.init == "000"
    assert hc.parameters == two_qubit_circuit.parameters


def test_equal_indices_give_certain_zero(four_rotations):
    for m in range(4):
        p0 = ancilla_zero_probability(hadamard_test_circuit(four_rotations, m, m), GENERIC_THETA)
        assert p0 == pytest.approx(1.0, abs=1e-12)
    estimate = estimate_overlap(four_rotations, GENERIC_THETA, 1, 1, shots=500, seed=3)
    assert estimate.value == 1.0


def test_multi_term_generator_is_unsupported():
    c = circuit_from_dict({
        "qubits": 2,
        "gates": [
            {"type": "ry", "qubit": 0, "param": "a"},
            {"type": "rp", "strings": ["XX", "YY"], "param": "b"},
        ],
    })
    with pytest.raises(UnsupportedError):
        hadamard_test_circuit(c, 0, 1)
    with pytest.raises(UnsupportedError):
        estimate_s_matrix(c, [0.2, 0.4], 2, shots=100, seed=1)


def test_overlap_estimate_is_reproducible(four_rotations):
    a = estimate_overlap(four_rotations, GENERIC_THETA, 0, 2, shots=1000, seed=9)
    b = estimate_overlap(four_rotations, GENERIC_THETA, 0, 2, shots=1000, seed=9)
    assert a == b
    assert a.value == pytest.approx(2 * a.p0_hat - 1)
    assert -1.0 <= a.value <= 1.0


def test_overlap_estimate_concentrates(four_rotations):
    s = s_matrix(four_rotations, GENERIC_THETA).entries
    estimate = estimate_overlap(four_rotations, GENERIC_THETA, 1, 2, shots=200_000, seed=4)
    assert estimate.value / 4 == pytest.approx(s[1, 2], abs=0.01)


def test_overlap_needs_positive_shots(four_rotations):
    with pytest.raises(ConfigError):
        estimate_overlap(four_rotations, GENERIC_THETA, 0, 1, shots=0, seed=1)


def test_exact_mode_equals_s_matrix(four_rotations):
    noisy = estimate_s_matrix(four_rotations, GENERIC_THETA, 3, shots=None, seed=None)
    exact = s_matrix(four_rotations, GENERIC_THETA, range(3))
    np.testing.assert_array_equal(noisy.mean.entries, exact.entries)
    np.testing.assert_array_equal(noisy.stddev, np.zeros(3))


def test_noisy_matrix_shape_and_diagonal(four_rotations):
    noisy = estimate_s_matrix(four_rotations, GENERIC_THETA, 4, shots=1000, seed=5, resamples=50)
    assert noisy.replicas.shape == (50, 4, 4)
    assert noisy.resamples == 50
    np.testing.assert_array_equal(np.diag(noisy.mean.entries), 0.25)
    np.testing.assert_array_equal(noisy.replicas[:, 2, 2], 0.25)
    np.testing.assert_array_equal(noisy.replicas, np.swapaxes(noisy.replicas, 1, 2))
    assert noisy.stddev.shape == (4,)
    assert np.all(noisy.stddev > 0)


def test_noisy_matrix_needs_a_seed(four_rotations):
    with pytest.raises(ConfigError):
        estimate_s_matrix(four_rotations, GENERIC_THETA, 2, shots=100, seed=None)


def test_restrict_matches_block(four_rotations):
    noisy = estimate_s_matrix(four_rotations, GENERIC_THETA, 4, shots=1000, seed=5, resamples=20)
    block = noisy.restrict([0, 2])
    np.testing.assert_array_equal(block.mean.entries, noisy.mean.entries[np.ix_([0, 2], [0, 2])])
    np.testing.assert_array_equal(block.replicas[:, 0, 1], noisy.replicas[:, 0, 2])


def test_noisy_classification_is_byte_reproducible(four_rotations):
    kwargs = dict(shots=1000, seed=77, resamples=200)
    a = classify_with_noise(four_rotations, GENERIC_THETA, **kwargs)
    b = classify_with_noise(four_rotations, GENERIC_THETA, **kwargs)
    assert a.model_dump_json() == b.model_dump_json()
    assert a.shots == 1000
    assert a.z_threshold == 3.0


def test_exact_repetition_stays_redundant_under_noise(rx_rx):
    # S12 = S11 exactly, so every shot agrees and the estimate is exactly singular
    for seed in range(10):
        report = classify_with_noise(rx_rx, [0.7, 2.1], shots=1000, seed=seed, resamples=100)
        assert report.verdicts() == [IND, RED]


def test_no_shots_falls_back_to_exact(four_rotations):
    report = classify_with_noise(four_rotations, GENERIC_THETA, shots=None, seed=None)
    assert report.verdicts() == [IND, IND, IND, RED]
    assert report.shots is None


def test_noisy_verdicts_carry_spreads(four_rotations):
    report = classify_with_noise(four_rotations, GENERIC_THETA, shots=4000, seed=2, resamples=200)
    second = report.parameters[1]
    assert second.lambda_min_std is not None and second.lambda_min_std > 0
    assert second.lambda_second_std is not None


def test_eigenvalue_table_rows(four_rotations):
    rows = eigenvalue_table(four_rotations, GENERIC_THETA, shots=1000, seed=3, resamples=50)
    assert [r["k"] for r in rows] == [2, 3, 4]
    assert all(r["shots"] == 1000 and r["seed"] == 3 for r in rows)
    assert all(r["lambda_min"] <= r["lambda_second"] for r in rows)


def test_exact_eigenvalue_table(four_rotations):
    rows = eigenvalue_table(four_rotations, GENERIC_THETA, shots=None, seed=None)
    assert rows[0]["shots"] == "exact"
    assert rows[0]["seed"] == ""
    assert rows[-1]["lambda_min"] == pytest.approx(0.0, abs=1e-12)
    assert rows[-1]["lambda_min_std"] == 0.0


def test_gram_entry_exact_and_sampled(rz_rx):
    a, b = [0.3, 1.0], [2.0, 0.5]
    exact = inner(evolve(rz_rx, a), evolve(rz_rx, b)).real
    assert estimate_gram_entry(rz_rx, a, b, shots=None) == exact
    sampled = estimate_gram_entry(rz_rx, a, b, shots=100_000, seed=[1, 0, 1])
    assert sampled == pytest.approx(exact, abs=0.02)
    assert sampled == estimate_gram_entry(rz_rx, a, b, shots=100_000, seed=[1, 0, 1])
    with pytest.raises(ConfigError):
        estimate_gram_entry(rz_rx, a, b, shots=10)


def test_fourth_step_is_measured_under_noise(four_rotations):
    report = classify_with_noise(four_rotations, GENERIC_THETA, shots=8000, seed=0, resamples=300)
    last = report.parameters[3]
    assert not last.skipped
    assert last.lambda_min is not None
    assert last.lambda_min_std > 0
    assert report.cap is None


def test_supplied_cap_still_skips_under_noise(four_rotations):
    report = classify_with_noise(four_rotations, GENERIC_THETA, shots=1000, seed=0, resamples=50, cap=2)
    assert [p.skipped for p in report.parameters] == [False, False, True, True]
    assert report.cap == 2


def _fourth_rotation_runs(circuit, thetas, seeds, resamples):
    patterns = near_zero = 0
    for theta in thetas:
        for seed in seeds:
            report = classify_with_noise(circuit, theta, shots=8000, seed=seed, resamples=resamples)
            last = report.parameters[3]
            patterns += report.verdicts() == [IND, IND, IND, RED]
            near_zero += abs(last.lambda_min) <= 3 * last.lambda_min_std
    return patterns, near_zero


def _generic_thetas(count, seed):
    # lambda_min(S_3) = (1 - |cos t2|) / 4, so keep t2 away from 0 and pi
    rng = np.random.default_rng(seed)
    return [random_assignment(4, rng=rng, margin=0.5) for _ in range(count)]


def test_fourth_rotation_at_random_points(four_rotations):
    patterns, near_zero = _fourth_rotation_runs(four_rotations, _generic_thetas(10, 1), range(2), 300)
    assert patterns >= 19
    assert near_zero >= 19


def test_spread_shrinks_with_shots(four_rotations):
    spreads = {shots: [] for shots in settings.SHOT_PRESETS}
    for seed in range(20):
        for row in eigenvalue_sweep(four_rotations, GENERIC_THETA, seed, resamples=300):
            if row["k"] == 4:
                spreads[row["shots"]].append(row["lambda_min_std"])
    mean = {shots: np.mean(values) for shots, values in spreads.items()}
    for shots in (4000, 8000):
        expected = np.sqrt(shots / 1000)
        ratio = mean[1000] / mean[shots]
        assert expected / 1.5 < ratio < expected * 1.5


def test_sweep_rows_follow_presets(four_rotations):
    rows = eigenvalue_sweep(four_rotations, GENERIC_THETA, 4, shot_counts=(100, 200), resamples=20)
    assert [(r["shots"], r["k"]) for r in rows] == [(100, 2), (100, 3), (100, 4), (200, 2), (200, 3), (200, 4)]


@pytest.mark.slow
def test_fourth_rotation_found_under_shot_noise(four_rotations):
    patterns, near_zero = _fourth_rotation_runs(four_rotations, _generic_thetas(10, 2), range(100), 1000)
    assert patterns >= 950
    assert near_zero >= 950
