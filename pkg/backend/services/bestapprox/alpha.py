"""
Discrete best-approximation error alpha_C^D and its density certificate.

Distances are chordal, |u - y|^2 = 2 - 2<u, y> on realified unit vectors, so
the farthest point from D is the unit vector minimizing max_j <u, y_j>. Let
m* be that minimum over the unit sphere of span(D). When span(D) is smaller
than the state space a unit vector orthogonal to D is available, giving

    alpha^2 = 2 - 2 min(0, m*)    (rank < state-space dimension)
    alpha^2 = 2 - 2 m*            (rank = state-space dimension)
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Optional, Tuple, Union

import numpy as np
from scipy.spatial import ConvexHull, SphericalVoronoi
from scipy.stats import norm

from errors import CircuitValidationError, UnsupportedError
from schemas.reports import AlphaEstimate, AlphaMethod
from services.bestapprox.embedding import gram_embed
from services.bestapprox.sampling import SampleSet, draw, sobol_generator
from services.circuit_core.circuit import ParametricCircuit
from services.sectors import SectorSpec, sector_basis

logger = logging.getLogger(__name__)

MEMBERSHIP_TOLERANCE = 1e-8
DEDUPE_DECIMALS = 12
PROBE_CHUNK = 4096


@dataclass(frozen=True)
class StateSpace:
    """Real orthonormal frame (columns) of the realified state space."""

    frame: np.ndarray

    def __post_init__(self):
        frame = np.asarray(self.frame, dtype=float)
        if frame.ndim != 2 or frame.shape[1] < 1:
            raise CircuitValidationError("State-space frame must be a non-empty matrix of column vectors")
        if not np.allclose(frame.T @ frame, np.eye(frame.shape[1]), atol=1e-10):
            raise CircuitValidationError("State-space frame columns must be orthonormal")
        object.__setattr__(self, "frame", frame)

    @classmethod
    def device(cls, qubits: int) -> "StateSpace":
        return cls(np.eye(2 ** (qubits + 1)))

    @classmethod
    def sector(cls, spec: SectorSpec) -> "StateSpace":
        columns = []
        for e in sector_basis(spec):
            amps = e.amplitudes
            columns.append(np.concatenate([amps.real, amps.imag]))
            columns.append(np.concatenate([-amps.imag, amps.real]))
        return cls(np.array(columns).T)

    @property
    def dimension(self) -> int:
        return int(self.frame.shape[1])

    @property
    def ambient(self) -> int:
        return int(self.frame.shape[0])

    def contains(self, realified: np.ndarray, tol: float = MEMBERSHIP_TOLERANCE) -> bool:
        residual = realified - self.frame @ (self.frame.T @ realified)
        return float(np.linalg.norm(residual)) < tol


def _unit_rows(x: np.ndarray) -> np.ndarray:
    norms = np.linalg.norm(x, axis=1, keepdims=True)
    keep = norms[:, 0] > 1e-12
    return x[keep] / norms[keep]


def _worst_inner(candidates: np.ndarray, points: np.ndarray) -> float:
    """min over candidates of max_j <candidate, y_j>."""
    best = math.inf
    for start in range(0, candidates.shape[0], PROBE_CHUNK):
        block = candidates[start:start + PROBE_CHUNK]
        best = min(best, float(np.min(np.max(block @ points.T, axis=1))))
    return best


def _m_star_line(points: np.ndarray) -> float:
    values = points[:, 0]
    return min(float(np.max(values)), float(np.max(-values)))


def _m_star_arc(points: np.ndarray) -> float:
    angles = np.sort(np.mod(np.arctan2(points[:, 1], points[:, 0]), 2 * math.pi))
    gaps = np.diff(np.append(angles, angles[0] + 2 * math.pi))
    return math.cos(float(np.max(gaps)) / 2)


def _m_star_probe(points: np.ndarray, probes: int, seed: Optional[int]) -> float:
    u = draw(sobol_generator(points.shape[1], seed), probes)
    directions = _unit_rows(norm.ppf(np.clip(u, 1e-12, 1 - 1e-12)))
    return _worst_inner(np.vstack([directions, -points]), points)


def _m_star_voronoi(points: np.ndarray, probes: int, seed: Optional[int]) -> Tuple[float, Optional[int], AlphaMethod]:
    unique = np.unique(np.round(points, DEDUPE_DECIMALS), axis=0)
    unique = _unit_rows(unique)
    if unique.shape[0] < 4:
        return _m_star_probe(points, probes, seed), None, AlphaMethod.PROBE
    try:
        sv = SphericalVoronoi(unique, radius=1.0, center=np.zeros(3))
        hull = ConvexHull(unique)
    except (ValueError, RuntimeError) as exc:
        logger.debug("Spherical Voronoi failed (%s); using probes", exc)
        return _m_star_probe(points, probes, seed), None, AlphaMethod.PROBE
    edges = {tuple(sorted((s[i], s[(i + 1) % 3]))) for s in hull.simplices for i in range(3)}
    midpoints = _unit_rows(np.array([-(unique[i] + unique[j]) for i, j in edges]))
    candidates = np.vstack([_unit_rows(sv.vertices), -unique, midpoints])
    return _worst_inner(candidates, unique), int(sv.vertices.shape[0]), AlphaMethod.VORONOI_3D


def min_max_inner(
    points: np.ndarray,
    method: Optional[AlphaMethod] = None,
    probes: int = 100_000,
    seed: Optional[int] = None,
) -> Tuple[float, AlphaMethod, Optional[int]]:
    """m* = min over unit u in span(points) of max_j <u, y_j>, for unit rows
    ``points`` given in coordinates of their span. Returns (m*, method, vertex_count)."""
    rank = points.shape[1]
    if method == AlphaMethod.PROBE:
        return _m_star_probe(points, probes, seed), AlphaMethod.PROBE, None
    if method == AlphaMethod.ARC and rank > 2:
        raise UnsupportedError(f"The arc method needs rank <= 2, embedding has rank {rank}")
    if method == AlphaMethod.VORONOI_3D and rank != 3:
        raise UnsupportedError(f"The voronoi-3d method needs rank 3, embedding has rank {rank}")
    if rank == 1:
        return _m_star_line(points), AlphaMethod.ARC, None
    if rank == 2:
        return _m_star_arc(points), AlphaMethod.ARC, None
    if rank == 3:
        m_star, vertices, used = _m_star_voronoi(points, probes, seed)
        return m_star, used, vertices
    return _m_star_probe(points, probes, seed), AlphaMethod.PROBE, None


def epsilon_density(c: ParametricCircuit, samples: SampleSet) -> float:
    """Certified density from ||d_k C|| <= terms_k / 2:
    eps = sum_k radius_k * terms_k / 2."""
    if samples.radius is None:
        raise UnsupportedError(
            f"No covering radius for a '{samples.provenance}' sample set; supply a dispersion bound",
            details={"provenance": samples.provenance},
        )
    if len(samples.radius) != c.num_parameters:
        raise CircuitValidationError("Covering radius does not match the parameter count")
    terms = [c.rotation(k).generator.num_terms for k in range(c.num_parameters)]
    return float(sum(r * t / 2 for r, t in zip(samples.radius, terms)))


def alpha_hat(
    c: ParametricCircuit,
    samples: SampleSet,
    space: Union[StateSpace, SectorSpec, None] = None,
    *,
    method: Optional[AlphaMethod] = None,
    probes: int = 100_000,
    seed: Optional[int] = None,
) -> AlphaEstimate:
    """alpha_C^D over the device sphere, a sector, or an explicit frame."""
    if isinstance(space, SectorSpec):
        space = StateSpace.sector(space)
    space = space or StateSpace.device(c.qubits)
    if space.ambient != 2 ** (c.qubits + 1):
        raise CircuitValidationError("State-space frame does not match the circuit width")
    outside = [
        i for i, s in enumerate(samples.states(c)) if not space.contains(s.realified())
    ]
    if outside:
        raise CircuitValidationError(
            f"{len(outside)} sample state(s) lie outside the state space", details={"first": outside[0]}
        )

    embedding = gram_embed(c, samples)
    points = _unit_rows(embedding.coordinates)
    if embedding.rank > space.dimension:
        raise CircuitValidationError("Sample states span more than the state space")
    m_star, used, vertices = min_max_inner(points, method, probes, seed)
    if embedding.rank < space.dimension:
        m_star = min(0.0, m_star)
    value = math.sqrt(min(4.0, max(0.0, 2.0 - 2.0 * m_star)))

    try:
        epsilon = epsilon_density(c, samples)
    except UnsupportedError:
        epsilon = None
    logger.info("alpha_hat=%.6f (method %s, rank %d, N=%d)", value, used.value, embedding.rank, samples.size)
    return AlphaEstimate(
        alpha_hat=value,
        epsilon=epsilon,
        lower=None if epsilon is None else value - epsilon,
        method=used,
        N=samples.size,
        rank=embedding.rank,
        M=probes if used == AlphaMethod.PROBE else None,
        vertex_count=vertices,
    )
