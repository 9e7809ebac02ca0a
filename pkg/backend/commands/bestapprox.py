"""
bestapprox: discrete best-approximation error with its certificate and,
optionally, the volume-based lower bound
"""

import argparse
import logging
from typing import Dict

from commands.common import circuit_for
from schemas.config import RunConfig, SampleKind
from schemas.reports import BestApproxReport
from services.bestapprox import (
    alpha_hat,
    exceeds_diameter,
    grid_sample_set,
    lower_bound_from_volume,
    sobol_sample_set,
    volume,
)
from storage import OutputStore

logger = logging.getLogger(__name__)


def configure(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--samples", choices=[k.value for k in SampleKind], help="Sample set construction")
    parser.add_argument("--n", type=int, help="Grid nodes per axis, or Sobol sample count")
    parser.add_argument("--probes", type=int, help="Probe count for the probe estimator")
    parser.add_argument("--dispersion", type=float,
                        help="Per-coordinate covering radius of a Sobol sample set")
    parser.add_argument("--volume", action="store_true", help="Also compute vol(M) and the lower bound")
    parser.add_argument("--nodes", type=int, help="Quadrature nodes per axis (QMC: total)")


def cmd_bestapprox(cfg: RunConfig, store: OutputStore) -> int:
    circuit = circuit_for(cfg)
    if cfg.samples == SampleKind.SOBOL:
        samples = sobol_sample_set(circuit.num_parameters, cfg.n, cfg.seed, cfg.dispersion)
    else:
        samples = grid_sample_set(circuit.num_parameters, cfg.n)
    estimate = alpha_hat(circuit, samples, probes=cfg.probes, seed=cfg.seed)
    fields: Dict[str, object] = {}
    if cfg.volume:
        vol = volume(circuit, cfg.nodes, cfg.seed)
        bound = lower_bound_from_volume(circuit.num_parameters, vol)
        fields = {
            "volume": vol,
            "lower_bound_formula": bound,
            "flagged_exceeds_diameter": exceeds_diameter(bound),
        }
        if fields["flagged_exceeds_diameter"]:
            logger.warning("Lower-bound formula gives %.4g, above the diameter 2", bound)
    report = BestApproxReport(
        alpha_hat=estimate.alpha_hat,
        epsilon=estimate.epsilon,
        lower=estimate.lower,
        method=estimate.method,
        N=estimate.N,
        M=estimate.M,
        **fields,
    )
    store.add_json(cfg.report, report)
    return 0
