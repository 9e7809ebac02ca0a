"""
Volume of the circuit image under the metric g = S_N and the volume-based
lower bound 4 pi^(n/2 + 1) / (Gamma(n/2) vol).
"""

from __future__ import annotations

import itertools
import logging
import math
from typing import Optional

import numpy as np
from scipy.special import gamma

from errors import NonMinimalCircuitError, ParameterAssignmentError
from services.bestapprox.sampling import draw, sobol_generator
from services.circuit_core.circuit import ParametricCircuit
from services.dea import s_matrix
from services.simulator import TWO_PI

logger = logging.getLogger(__name__)

MAX_TENSOR_DIM = 3
DEFAULT_NODES = {1: 64, 2: 32, 3: 16}
DEFAULT_QMC_NODES = 4096
DIAMETER = 2.0
# det g below this fraction of the single-string scale (1/4)^n counts as singular
SINGULAR_FRACTION = 1e-12


def _nodes(dim: int, nodes: Optional[int], seed: Optional[int]) -> np.ndarray:
    if dim <= MAX_TENSOR_DIM:
        n = nodes or DEFAULT_NODES[dim]
        axis = np.arange(n) * (TWO_PI / n)
        return np.array(list(itertools.product(axis, repeat=dim)))
    return TWO_PI * draw(sobol_generator(dim, seed), nodes or DEFAULT_QMC_NODES)


def volume(c: ParametricCircuit, nodes: Optional[int] = None, seed: Optional[int] = None) -> float:
    """Integral of sqrt(det S_N(theta)) over [0, 2pi)^N.

    Periodic trapezoid rule for N <= 3 (``nodes`` per axis), Sobol
    quasi-Monte Carlo otherwise (``nodes`` in total).
    """
    dim = c.num_parameters
    if dim < 1:
        raise ParameterAssignmentError("Circuit has no parameters")
    points = _nodes(dim, nodes, seed)
    dets = np.array([np.linalg.det(s_matrix(c, theta).entries) for theta in points])
    if np.all(dets <= SINGULAR_FRACTION * 0.25 ** dim):
        raise NonMinimalCircuitError(
            "det g vanishes at every quadrature node; reduce the circuit with DEA first",
            details={"nodes": int(points.shape[0])},
        )
    value = float(np.mean(np.sqrt(np.clip(dets, 0.0, None)))) * TWO_PI ** dim
    logger.info("vol(M) = %.8g from %d node(s)", value, points.shape[0])
    return value


def lower_bound_from_volume(dim: int, vol: float) -> float:
    if dim < 1 or vol <= 0:
        raise ParameterAssignmentError("Need dim >= 1 and a positive volume")
    return float(4.0 * math.pi ** (dim / 2 + 1) / gamma(dim / 2) / vol)


def lower_bound(c: ParametricCircuit, nodes: Optional[int] = None, seed: Optional[int] = None) -> float:
    return lower_bound_from_volume(c.num_parameters, volume(c, nodes, seed))


def exceeds_diameter(bound: float) -> bool:
    return bool(bound > DIAMETER)
