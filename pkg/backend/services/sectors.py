"""
Translational symmetry: tau_Q, equivalence classes of basis states, sector
dimensions and sector bases.

Bitstrings are written with qubit Q-1 leftmost, so tau_Q on text is a left
rotation: b_{Q-1} ... b_0 -> b_{Q-2} ... b_0 b_{Q-1}.
"""

from __future__ import annotations

import cmath
import logging
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator, List, Optional, Tuple, Union

import numpy as np

from errors import CircuitValidationError, UnsupportedError
from services.simulator import StateVector, translate_state_vector

logger = logging.getLogger(__name__)

MAX_ENUMERATION_QUBITS = 24
MAX_BASIS_QUBITS = 12
MAX_ORACLE_QUBITS = 10
EIGENVALUE_TOLERANCE = 1e-9


def translate_state(b: str) -> str:
    if not b or set(b) - {"0", "1"}:
        raise CircuitValidationError(f"Not a bitstring: {b!r}")
    return b[1:] + b[0]


def divisors(n: int) -> List[int]:
    """Ascending divisors of n."""
    if n < 1:
        raise ValueError("n must be positive")
    small, large = [], []
    y = 1
    while y * y <= n:
        if n % y == 0:
            small.append(y)
            if y != n // y:
                large.append(n // y)
        y += 1
    return small + large[::-1]


def _totient(n: int) -> int:
    return sum(1 for k in range(1, n + 1) if math.gcd(n, k) == 1)


@dataclass(frozen=True)
class EquivalenceClass:
    representative: str
    members: Tuple[str, ...]

    @property
    def order(self) -> int:
        return len(self.members)

    @property
    def weight(self) -> int:
        return self.representative.count("1")

    @classmethod
    def of(cls, b: str) -> "EquivalenceClass":
        """Class of ``b`` listed from its lexicographically smallest member."""
        orbit = [b]
        while True:
            nxt = translate_state(orbit[-1])
            if nxt == b:
                break
            orbit.append(nxt)
        rep = min(orbit)
        start = orbit.index(rep)
        return cls(rep, tuple(orbit[start:] + orbit[:start]))


@dataclass(frozen=True)
class SectorSpec:
    """Eigenspace of tau_Q with eigenvalue omega = exp(2 pi i p / Q) of order d."""

    Q: int
    p: int
    d: int

    def __post_init__(self):
        if self.Q < 1:
            raise CircuitValidationError("Q must be at least 1")
        if not 0 <= self.p < self.Q:
            raise CircuitValidationError(f"p must lie in [0, {self.Q - 1}]", details={"p": self.p})
        if self.d != self.Q // math.gcd(self.p, self.Q):
            raise CircuitValidationError(
                f"omega = exp(2 pi i {self.p}/{self.Q}) has order {self.Q // math.gcd(self.p, self.Q)}, not {self.d}"
            )

    @classmethod
    def from_exponent(cls, Q: int, p: int) -> "SectorSpec":
        return cls(Q, p, Q // math.gcd(p, Q))

    @classmethod
    def from_order(cls, Q: int, d: int) -> "SectorSpec":
        if Q < 1 or d < 1 or Q % d:
            raise CircuitValidationError(f"d={d} does not divide Q={Q}")
        return cls(Q, (Q // d) % Q, d)

    @property
    def omega(self) -> complex:
        return cmath.exp(2j * math.pi * self.p / self.Q)


def _as_spec(spec: Union[SectorSpec, int], d: Optional[int]) -> SectorSpec:
    if isinstance(spec, SectorSpec):
        return spec
    return SectorSpec.from_order(spec, 1 if d is None else d)


def _necklaces(Q: int) -> Iterator[str]:
    # FKM generation of binary necklaces, each the smallest rotation of its class
    a = [0] * (Q + 1)
    yield "0" * Q
    while True:
        i = Q
        while i > 0 and a[i] == 1:
            i -= 1
        if i == 0:
            return
        a[i] = 1
        for j in range(i + 1, Q + 1):
            a[j] = a[j - i]
        if Q % i == 0:
            yield "".join(str(x) for x in a[1:])


def equivalence_classes(Q: int) -> List[EquivalenceClass]:
    """Partition of all 2^Q bitstrings, sorted by (order, representative)."""
    if not 1 <= Q <= MAX_ENUMERATION_QUBITS:
        raise UnsupportedError(f"Q must lie in [1, {MAX_ENUMERATION_QUBITS}]", details={"Q": Q})
    classes = [EquivalenceClass.of(rep) for rep in _necklaces(Q)]
    classes.sort(key=lambda c: (c.order, c.representative))
    logger.debug("Q=%d: %d equivalence classes", Q, len(classes))
    return classes


def necklace_count(Q: int) -> int:
    """Number of classes by Burnside's lemma."""
    return sum(_totient(Q // d) * 2 ** d for d in divisors(Q)) // Q


@lru_cache(maxsize=None)
def aperiodic_count(k: int) -> int:
    """#(k): length-k bitstrings whose smallest period is k."""
    if k < 1:
        raise CircuitValidationError("k must be at least 1")
    return 2 ** k - sum(aperiodic_count(j) for j in divisors(k) if j < k)


def sector_dimension(spec: Union[SectorSpec, int], d: Optional[int] = None) -> int:
    """Real dimension of the unit sphere in the omega eigenspace.

    Accepts a SectorSpec or (Q, d).
    """
    spec = _as_spec(spec, d)
    complex_dim = sum(aperiodic_count(k) // k for k in divisors(spec.Q) if k % spec.d == 0)
    return 2 * complex_dim - 1


def sector_specs(Q: int) -> List[SectorSpec]:
    return [SectorSpec.from_order(Q, d) for d in divisors(Q)]


def translation_matrix(Q: int) -> np.ndarray:
    """2^Q x 2^Q permutation matrix of tau_Q."""
    size = 2 ** Q
    indices = np.arange(size)
    shifted = ((indices << 1) & (size - 1)) | (indices >> (Q - 1))
    matrix = np.zeros((size, size))
    matrix[shifted, indices] = 1.0
    return matrix


def brute_force_sector_dimension(spec: Union[SectorSpec, int], d: Optional[int] = None) -> int:
    spec = _as_spec(spec, d)
    if spec.Q > MAX_ORACLE_QUBITS:
        raise UnsupportedError(f"Brute-force oracle is limited to Q <= {MAX_ORACLE_QUBITS}")
    eigs = np.linalg.eigvals(translation_matrix(spec.Q))
    count = int(np.sum(np.abs(eigs - spec.omega) < EIGENVALUE_TOLERANCE))
    return 2 * count - 1


def sector_basis(spec: Union[SectorSpec, int], d: Optional[int] = None) -> List[StateVector]:
    """Orthonormal basis e = order^(-1/2) sum_j omega^j tau^j |b>, one vector per
    class whose order is divisible by d. Each satisfies tau e = conj(omega) e."""
    spec = _as_spec(spec, d)
    if spec.Q > MAX_BASIS_QUBITS:
        raise UnsupportedError(f"Sector bases are limited to Q <= {MAX_BASIS_QUBITS}")
    basis = []
    for cls in equivalence_classes(spec.Q):
        if cls.order % spec.d:
            continue
        amps = np.zeros(2 ** spec.Q, dtype=complex)
        for j, member in enumerate(cls.members):
            amps[int(member, 2)] = spec.omega ** j
        basis.append(StateVector(amps / math.sqrt(cls.order), spec.Q))
    return basis


def is_in_sector(state: StateVector, spec: SectorSpec, tol: float = 1e-10) -> bool:
    if state.qubits != spec.Q:
        raise CircuitValidationError(f"State has {state.qubits} qubit(s), sector is for {spec.Q}")
    residual = translate_state_vector(state).amplitudes - np.conj(spec.omega) * state.amplitudes
    return float(np.linalg.norm(residual)) < tol
