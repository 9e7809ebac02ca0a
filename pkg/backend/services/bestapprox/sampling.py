"""
Sample sets D in parameter space.
"""

from __future__ import annotations

import itertools
import logging
import warnings
from dataclasses import dataclass
from typing import List, Optional, Tuple

import numpy as np
from scipy.stats import qmc

from errors import ParameterAssignmentError, UnsupportedError
from services.circuit_core.circuit import ParametricCircuit
from services.simulator import TWO_PI, StateVector, evolve

logger = logging.getLogger(__name__)

MAX_SOBOL_DIM = 32


@dataclass(frozen=True)
class SampleSet:
    """Parameter assignments (N x dim) with their provenance.

    ``radius`` is the per-coordinate covering radius of the set in
    [0, 2pi)^dim when it is known.
    """

    thetas: np.ndarray
    provenance: str
    seed: Optional[int] = None
    radius: Optional[Tuple[float, ...]] = None

    def __post_init__(self):
        thetas = np.atleast_2d(np.asarray(self.thetas, dtype=float))
        if thetas.shape[0] < 1 or thetas.shape[1] < 1:
            raise ParameterAssignmentError("A sample set needs at least one point")
        thetas.setflags(write=False)
        object.__setattr__(self, "thetas", thetas)

    @property
    def size(self) -> int:
        return int(self.thetas.shape[0])

    @property
    def dim(self) -> int:
        return int(self.thetas.shape[1])

    def states(self, c: ParametricCircuit) -> List[StateVector]:
        if self.dim != c.num_parameters:
            raise ParameterAssignmentError(
                f"Sample points have {self.dim} coordinate(s), circuit has {c.num_parameters} parameter(s)"
            )
        return [evolve(c, theta) for theta in self.thetas]

    def union(self, other: "SampleSet") -> "SampleSet":
        return SampleSet(np.vstack([self.thetas, other.thetas]), provenance="user")


def sobol_generator(dim: int, seed: Optional[int] = None) -> qmc.Sobol:
    """Sobol engine, digitally scrambled from ``seed`` when one is given.
    Unscrambled engines skip the origin."""
    engine = qmc.Sobol(d=dim, scramble=seed is not None, seed=seed)
    if seed is None:
        engine.fast_forward(1)
    return engine


def draw(engine: qmc.Sobol, n: int) -> np.ndarray:
    with warnings.catch_warnings():
        # balance properties need powers of two; arbitrary N is allowed here
        warnings.simplefilter("ignore", UserWarning)
        return engine.random(n)


def sobol_points(dim: int, N: int, seed: Optional[int] = None) -> np.ndarray:
    """First N Sobol points in [0, 1)^dim; ``seed=None`` is unscrambled and
    starts at the origin."""
    if not 1 <= dim <= MAX_SOBOL_DIM:
        raise UnsupportedError(f"Sobol dimension must lie in [1, {MAX_SOBOL_DIM}]", details={"dim": dim})
    if N < 1:
        raise ParameterAssignmentError("N must be at least 1")
    engine = qmc.Sobol(d=dim, scramble=seed is not None, seed=seed)
    return draw(engine, N)


def sobol_sample_set(dim: int, N: int, seed: Optional[int], dispersion: Optional[float] = None) -> SampleSet:
    """Sobol points scaled to [0, 2pi)^dim. ``dispersion`` is a caller-supplied
    per-coordinate covering radius."""
    radius = None if dispersion is None else (float(dispersion),) * dim
    return SampleSet(TWO_PI * sobol_points(dim, N, seed), provenance="sobol", seed=seed, radius=radius)


def grid_sample_set(dim: int, n: int) -> SampleSet:
    """Cell-centred tensor grid with n nodes per axis, (j + 1/2) * 2pi / n."""
    if dim < 1 or n < 1:
        raise ParameterAssignmentError("Grid needs dim >= 1 and n >= 1")
    h = TWO_PI / n
    axis = (np.arange(n) + 0.5) * h
    thetas = np.array(list(itertools.product(axis, repeat=dim)))
    logger.debug("grid sample set: %d point(s), spacing %.4g", thetas.shape[0], h)
    return SampleSet(thetas, provenance="grid", radius=(h / 2,) * dim)


def user_sample_set(thetas) -> SampleSet:
    return SampleSet(np.asarray(thetas, dtype=float), provenance="user")
