"""
Isometric embedding of sample states from their real Gram matrix.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence, Union

import numpy as np

from errors import ConfigError, NumericalError
from services.bestapprox.sampling import SampleSet, user_sample_set
from services.circuit_core.circuit import ParametricCircuit
from services.shot_protocol import estimate_gram_entry

RANK_TOLERANCE = 1e-10
PSD_TOLERANCE = 1e-8


@dataclass(frozen=True)
class Embedding:
    coordinates: np.ndarray
    gram: np.ndarray

    @property
    def rank(self) -> int:
        return int(self.coordinates.shape[1])

    @property
    def size(self) -> int:
        return int(self.coordinates.shape[0])

    def distances(self) -> np.ndarray:
        diff = self.coordinates[:, None, :] - self.coordinates[None, :, :]
        return np.linalg.norm(diff, axis=-1)


def embed_gram(gram: np.ndarray) -> Embedding:
    """Coordinates = eigenvector rows scaled by sqrt(eigenvalue), keeping
    eigenvalues above RANK_TOLERANCE * lambda_max."""
    gram = np.asarray(gram, dtype=float)
    evals, evecs = np.linalg.eigh(gram)
    if evals[0] < -PSD_TOLERANCE:
        raise NumericalError(
            "Gram matrix is not positive semidefinite; overlap estimates are inconsistent",
            details={"lambda_min": float(evals[0])},
        )
    keep = evals > RANK_TOLERANCE * evals[-1]
    # largest eigenvalue first
    order = np.argsort(evals[keep])[::-1]
    coordinates = evecs[:, keep][:, order] * np.sqrt(evals[keep][order])
    return Embedding(coordinates=coordinates, gram=gram)


def gram_matrix(
    c: ParametricCircuit,
    samples: SampleSet,
    shots: Optional[int] = None,
    seed: Optional[int] = None,
) -> np.ndarray:
    """Re<C(theta_j), C(theta_k)>, exact or with shot-sampled off-diagonal entries."""
    if shots is None:
        amps = np.array([s.amplitudes for s in samples.states(c)])
        return (amps.conj() @ amps.T).real
    if seed is None:
        raise ConfigError("A seed is required for shot-sampled Gram entries")
    gram = np.eye(samples.size)
    for j in range(samples.size):
        for k in range(j + 1, samples.size):
            gram[j, k] = gram[k, j] = estimate_gram_entry(
                c, samples.thetas[j], samples.thetas[k], shots, seed=[seed, j, k]
            )
    return gram


def gram_embed(
    c: ParametricCircuit,
    samples: Union[SampleSet, Sequence[Sequence[float]], np.ndarray],
    shots: Optional[int] = None,
    seed: Optional[int] = None,
) -> Embedding:
    if not isinstance(samples, SampleSet):
        samples = user_sample_set(samples)
    return embed_gram(gram_matrix(c, samples, shots, seed))
