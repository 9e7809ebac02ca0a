import cmath
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from errors import CircuitValidationError, UnsupportedError
from services.sectors import (
    EquivalenceClass,
    SectorSpec,
    aperiodic_count,
    brute_force_sector_dimension,
    divisors,
    equivalence_classes,
    is_in_sector,
    necklace_count,
    sector_basis,
    sector_dimension,
    sector_specs,
    translate_state,
)
from services.simulator import StateVector, translate_state_vector

ALL_SECTORS = [(Q, d) for Q in range(1, 11) for d in divisors(Q)]


def test_translate_state_rotates_left():
    assert translate_state("001") == "010"
    assert translate_state("100") == "001"
    assert translate_state("0110") == "1100"


def test_translate_state_rejects_non_bits():
    with pytest.raises(CircuitValidationError):
        translate_state("012")


def test_divisors():
    assert divisors(1) == [1]
    assert divisors(12) == [1, 2, 3, 4, 6, 12]


def test_classes_of_three_qubits():
    classes = equivalence_classes(3)
    assert [c.representative for c in classes] == ["000", "111", "001", "011"]
    assert [c.order for c in classes] == [1, 1, 3, 3]
    assert classes[2].members == ("001", "010", "100")


def test_class_of_periodic_string():
    cls = EquivalenceClass.of("1010")
    assert cls.representative == "0101"
    assert cls.order == 2
    assert cls.weight == 2


@pytest.mark.parametrize("Q", range(1, 13))
def test_classes_partition_all_bitstrings(Q):
    classes = equivalence_classes(Q)
    members = [m for c in classes for m in c.members]
    assert len(members) == 2 ** Q
    assert len(set(members)) == 2 ** Q
    assert len(classes) == necklace_count(Q)


def test_necklace_counts():
    assert [necklace_count(Q) for Q in range(1, 7)] == [2, 3, 4, 6, 8, 14]


def test_aperiodic_counts():
    assert [aperiodic_count(k) for k in range(1, 7)] == [2, 2, 6, 12, 30, 54]


def test_enumeration_limit():
    with pytest.raises(UnsupportedError):
        equivalence_classes(25)


def test_sector_spec_from_order():
    spec = SectorSpec.from_order(6, 3)
    assert (spec.p, spec.d) == (2, 3)
    assert spec.omega == pytest.approx(cmath.exp(2j * math.pi / 3))
    assert SectorSpec.from_order(4, 1).p == 0


@pytest.mark.parametrize("args", [(4, 4, 1), (4, 1, 2), (3, 0, 3)], ids=["p-range", "wrong-order", "trivial-order"])
def test_sector_spec_validation(args):
    with pytest.raises(CircuitValidationError):
        SectorSpec(*args)


def test_order_must_divide_q():
    with pytest.raises(CircuitValidationError):
        SectorSpec.from_order(6, 4)


def test_sector_specs_cover_every_divisor():
    assert [s.d for s in sector_specs(6)] == [1, 2, 3, 6]


@pytest.mark.parametrize(
    ("Q", "d", "dim"),
    [(3, 1, 7), (3, 3, 3), (4, 1, 11), (4, 2, 7), (4, 4, 5), (1, 1, 3), (2, 2, 1)],
)
def test_known_dimensions(Q, d, dim):
    assert sector_dimension(Q, d) == dim
    assert sector_dimension(SectorSpec.from_order(Q, d)) == dim


@pytest.mark.parametrize(("Q", "d"), ALL_SECTORS, ids=[f"Q{Q}-d{d}" for Q, d in ALL_SECTORS])
def test_formula_matches_brute_force(Q, d):
    assert sector_dimension(Q, d) == brute_force_sector_dimension(Q, d)


def test_every_case_up_to_ten_qubits_is_checked():
    assert len(ALL_SECTORS) == 27


@pytest.mark.parametrize("Q", range(1, 11))
def test_sector_dimensions_fill_the_space(Q):
    # complex dimensions over all sectors sum to 2^Q
    complex_dims = [(sector_dimension(s) + 1) // 2 for s in sector_specs(Q)]
    per_exponent = {s.d: dim for s, dim in zip(sector_specs(Q), complex_dims)}
    total = sum(per_exponent[Q // math.gcd(p, Q)] for p in range(Q))
    assert total == 2 ** Q


def test_brute_force_limit():
    with pytest.raises(UnsupportedError):
        brute_force_sector_dimension(11, 1)


@pytest.mark.parametrize(("Q", "d"), [(3, 1), (3, 3), (4, 2), (6, 3), (6, 6)])
def test_basis_is_orthonormal_eigenbasis(Q, d):
    spec = SectorSpec.from_order(Q, d)
    basis = sector_basis(spec)
    assert len(basis) == (sector_dimension(spec) + 1) // 2
    frame = np.array([e.amplitudes for e in basis])
    np.testing.assert_allclose(frame.conj() @ frame.T, np.eye(len(basis)), atol=1e-12)
    for e in basis:
        shifted = translate_state_vector(e).amplitudes
        np.testing.assert_allclose(shifted, np.conj(spec.omega) * e.amplitudes, atol=1e-12)
        assert is_in_sector(e, spec)


def test_basis_limit():
    with pytest.raises(UnsupportedError):
        sector_basis(13, 1)


def test_membership():
    spec = SectorSpec.from_order(3, 1)
    assert is_in_sector(StateVector.basis("111"), spec)
    assert not is_in_sector(StateVector.basis("001"), spec)
    with pytest.raises(CircuitValidationError):
        is_in_sector(StateVector.basis("01"), spec)


@settings(max_examples=50, deadline=None)
@given(st.integers(min_value=1, max_value=12).flatmap(
    lambda n: st.text(alphabet="01", min_size=n, max_size=n)
))
def test_class_representative_is_smallest_member(bits):
    cls = EquivalenceClass.of(bits)
    assert cls.representative == min(cls.members)
    assert bits in cls.members
    assert len(bits) % cls.order == 0
