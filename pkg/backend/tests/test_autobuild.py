import numpy as np
import pytest

from errors import UnsupportedError
from schemas.reports import Verdict
from services.autobuild import (
    build_sector_circuit,
    build_x_gate,
    build_xy_gate,
    build_z_gate,
    canonical_representatives,
    plan_sector_circuit,
    verify_sector_circuit,
)
from services.circuit_core import ParametricRotation
from services.dea import classify_parameters
from services.sectors import sector_dimension
from services.simulator import evolve, random_assignment, translate_state_vector


def test_three_qubit_representatives():
    reps = canonical_representatives(3)
    assert [r.B for r in reps] == ["001", "011", "111"]
    assert [r.weight for r in reps] == [1, 2, 3]
    assert [r.class_order for r in reps] == [3, 3, 1]


def test_representative_has_low_bit_set_and_high_bit_clear():
    for rep in canonical_representatives(6):
        if rep.B != "1" * 6:
            assert rep.B[-1] == "1"
            assert rep.B[0] == "0"


def test_representatives_sorted_by_weight_then_value():
    reps = canonical_representatives(5)
    keys = [(r.weight, r.value) for r in reps]
    assert keys == sorted(keys)


def test_x_gate_is_the_class_orbit():
    rep = canonical_representatives(3)[1]
    assert sorted(build_x_gate(rep).texts()) == ["IXX", "XIX", "XXI"]


def test_x_gate_of_periodic_class_has_class_order_terms():
    rep = next(r for r in canonical_representatives(4) if r.B == "0101")
    assert sorted(build_x_gate(rep).texts()) == ["IXIX", "XIXI"]


def test_xy_gate_puts_y_on_the_lowest_one():
    rep = next(r for r in canonical_representatives(3) if r.B == "011")
    g = build_xy_gate(rep)
    assert g.texts()[0] == "IXY"
    assert sorted(g.texts()) == ["IXY", "XYI", "YIX"]


def test_xy_gate_of_periodic_class_has_q_terms():
    rep = next(r for r in canonical_representatives(4) if r.B == "0101")
    assert build_xy_gate(rep).num_terms == 4


def test_z_gate():
    assert sorted(build_z_gate(3).texts()) == ["IIZ", "IZI", "ZII"]


@pytest.mark.parametrize("Q", range(1, 9))
def test_generators_commute_with_translation(Q):
    for _, generator in plan_sector_circuit(Q).gates:
        assert generator.is_translation_invariant()


@pytest.mark.parametrize("Q", range(1, 11))
def test_parameter_count_is_sector_dimension(Q):
    assert plan_sector_circuit(Q).num_parameters == sector_dimension(Q, 1)


def test_three_qubit_plan_order():
    names = [name for name, _ in plan_sector_circuit(3).gates]
    assert names == ["z", "x001", "xy001", "x011", "xy011", "x111", "xy111"]


def test_built_circuit():
    c = build_sector_circuit(3)
    assert c.qubits == 3
    assert c.init == "000"
    assert c.num_parameters == 7
    assert c.parameters[0] == "z"


def test_build_limit():
    with pytest.raises(UnsupportedError):
        build_sector_circuit(11)


@pytest.mark.parametrize("Q", [2, 3, 4])
def test_output_stays_in_trivial_sector(Q):
    c = build_sector_circuit(Q)
    theta = random_assignment(c.num_parameters, seed=Q)
    state = evolve(c, theta)
    np.testing.assert_allclose(translate_state_vector(state).amplitudes, state.amplitudes, atol=1e-10)


@pytest.mark.parametrize("Q", [1, 2, 3, 4])
def test_verification_passes(Q):
    c = build_sector_circuit(Q)
    report = verify_sector_circuit(c, Q, trials=5, seed=2024)
    assert report.passed
    assert report.parameters == report.cap == sector_dimension(Q, 1)
    assert [t.label for t in report.trials] == ["zero"] + [f"random-{i}" for i in range(5)]
    assert all(t.independent == c.num_parameters for t in report.trials)


@pytest.mark.slow
def test_verification_passes_for_five_qubits():
    assert verify_sector_circuit(build_sector_circuit(5), 5, trials=5, seed=2024).passed


def test_extra_gate_is_redundant():
    c = build_sector_circuit(3)
    extra = ParametricRotation(c.gates[1].generator, "again")
    longer = c.with_gates(list(c.gates) + [extra])
    theta = random_assignment(longer.num_parameters, seed=8)
    report = classify_parameters(longer, theta)
    assert report.verdicts()[-1] == Verdict.REDUNDANT
    assert report.num_independent == 7


def test_verification_without_random_trials():
    c = build_sector_circuit(2)
    report = verify_sector_circuit(c, 2, trials=0)
    assert [t.label for t in report.trials] == ["zero"]
    assert report.passed
