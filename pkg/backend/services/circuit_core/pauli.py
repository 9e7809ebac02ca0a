"""
Pauli strings and Pauli-sum generators.

A Pauli string on Q qubits is stored qubit-indexed: ``letters[q]`` is the
letter acting on qubit q. Text forms write qubit Q-1 leftmost, the same
convention as computational basis bitstrings, so ``"XIY"`` is X_2 (x) Y_0.

Statevector amplitudes are indexed by i = sum_q b_q 2^q. A Pauli string acts
on basis states through two bit masks:

    P |i> = i^{#Y} (-1)^{popcount(i & z_mask)} |i ^ x_mask>

with x_mask marking X/Y positions and z_mask marking Z/Y positions.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property, lru_cache, reduce
from itertools import combinations
from typing import Dict, Iterable, Tuple

import numpy as np

from errors import CircuitValidationError

PAULI_LETTERS = "IXYZ"

_MATRICES = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}


@lru_cache(maxsize=32)
def basis_indices(size: int) -> np.ndarray:
    indices = np.arange(size, dtype=np.int64)
    indices.setflags(write=False)
    return indices


def _parity(indices: np.ndarray, mask: int) -> np.ndarray:
    parity = np.zeros(indices.shape, dtype=np.int64)
    q = 0
    while mask >> q:
        if (mask >> q) & 1:
            parity ^= (indices >> q) & 1
        q += 1
    return parity


@dataclass(frozen=True)
class PauliString:
    letters: Tuple[str, ...]

    def __post_init__(self):
        if not self.letters:
            raise CircuitValidationError("Pauli string must act on at least one qubit")
        bad = [c for c in self.letters if c not in PAULI_LETTERS]
        if bad:
            raise CircuitValidationError(
                f"Invalid Pauli letter(s) {sorted(set(bad))}; expected I, X, Y or Z",
                details={"letters": "".join(self.letters)},
            )

    @classmethod
    def from_text(cls, text: str) -> "PauliString":
        return cls(tuple(reversed(text.strip().upper())))

    @classmethod
    def from_ops(cls, num_qubits: int, ops: Dict[int, str]) -> "PauliString":
        letters = ["I"] * num_qubits
        for qubit, letter in ops.items():
            if not 0 <= qubit < num_qubits:
                raise CircuitValidationError(
                    f"Qubit {qubit} out of range for {num_qubits} qubit(s)"
                )
            letters[qubit] = letter
        return cls(tuple(letters))

    @property
    def num_qubits(self) -> int:
        return len(self.letters)

    @property
    def text(self) -> str:
        return "".join(reversed(self.letters))

    @property
    def support(self) -> Tuple[int, ...]:
        return tuple(q for q, c in enumerate(self.letters) if c != "I")

    @property
    def is_identity(self) -> bool:
        return not self.support

    @cached_property
    def x_mask(self) -> int:
        return sum(1 << q for q, c in enumerate(self.letters) if c in "XY")

    @cached_property
    def z_mask(self) -> int:
        return sum(1 << q for q, c in enumerate(self.letters) if c in "ZY")

    @cached_property
    def phase(self) -> complex:
        return 1j ** (self.letters.count("Y") % 4)

    def apply(self, state: np.ndarray) -> np.ndarray:
        """Return P|state>. The register may be wider than the string; extra
        high qubits are left untouched."""
        indices = basis_indices(state.size)
        signs = 1 - 2 * _parity(indices, self.z_mask)
        out = np.empty_like(state)
        out[indices ^ self.x_mask] = self.phase * signs * state
        return out

    def to_matrix(self) -> np.ndarray:
        # kron runs from qubit Q-1 down to qubit 0 so that row index = sum b_q 2^q
        return reduce(np.kron, (_MATRICES[c] for c in reversed(self.letters)))

    def __str__(self) -> str:
        return self.text


def pauli_commute(a: PauliString, b: PauliString) -> bool:
    """True iff the strings commute: an even number of positions carry two
    different non-identity letters."""
    if a.num_qubits != b.num_qubits:
        raise CircuitValidationError(
            f"Pauli strings have different lengths ({a.num_qubits} vs {b.num_qubits})"
        )
    clashes = sum(
        1 for x, y in zip(a.letters, b.letters) if x != "I" and y != "I" and x != y
    )
    return clashes % 2 == 0


def translate_string(p: PauliString) -> PauliString:
    """Move the letter on qubit q to qubit q+1 mod Q."""
    return PauliString(p.letters[-1:] + p.letters[:-1])


@dataclass(frozen=True)
class Generator:
    """Hermitian sum of distinct Pauli strings, each with coefficient +1."""

    terms: Tuple[PauliString, ...]

    def __post_init__(self):
        if not self.terms:
            raise CircuitValidationError("Generator needs at least one Pauli term")
        widths = {t.num_qubits for t in self.terms}
        if len(widths) != 1:
            raise CircuitValidationError(
                "Generator terms act on different numbers of qubits",
                details={"terms": [t.text for t in self.terms]},
            )
        if len(set(self.terms)) != len(self.terms):
            raise CircuitValidationError(
                "Generator contains duplicate Pauli terms",
                details={"terms": [t.text for t in self.terms]},
            )
        if any(t.is_identity for t in self.terms):
            raise CircuitValidationError("Generator may not contain the identity string")

    @classmethod
    def from_texts(cls, texts: Iterable[str]) -> "Generator":
        return cls(tuple(PauliString.from_text(t) for t in texts))

    @classmethod
    def single(cls, num_qubits: int, qubit: int, letter: str) -> "Generator":
        return cls((PauliString.from_ops(num_qubits, {qubit: letter}),))

    @property
    def num_qubits(self) -> int:
        return self.terms[0].num_qubits

    @property
    def num_terms(self) -> int:
        return len(self.terms)

    @cached_property
    def commuting(self) -> bool:
        return all(pauli_commute(a, b) for a, b in combinations(self.terms, 2))

    def apply(self, state: np.ndarray) -> np.ndarray:
        """Return G|state> (not unitary for more than one term)."""
        out = self.terms[0].apply(state)
        for term in self.terms[1:]:
            out = out + term.apply(state)
        return out

    def to_matrix(self) -> np.ndarray:
        return sum(t.to_matrix() for t in self.terms)

    def translated(self) -> "Generator":
        return Generator(tuple(translate_string(t) for t in self.terms))

    def is_translation_invariant(self) -> bool:
        return set(self.translated().terms) == set(self.terms)

    def texts(self) -> list:
        return [t.text for t in self.terms]
