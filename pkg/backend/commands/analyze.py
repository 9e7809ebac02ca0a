"""
analyze: classify every parameter of a circuit as independent or redundant
"""

import argparse
import logging

from commands.common import CSV_COLUMNS, circuit_for, theta_for, theta_seed, tolerance_for
from schemas.config import RunConfig
from services.dea import classify_parameters
from services.shot_protocol import classify_with_noise, eigenvalue_sweep, eigenvalue_table
from storage import OutputStore

logger = logging.getLogger(__name__)


def configure(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--z-threshold", dest="z_threshold", type=float,
                        help="Noise-aware rule: invertible when lambda_min > z * stddev")
    parser.add_argument("--resamples", type=int, help="Bootstrap resamples per entry")
    parser.add_argument("--sweep", action="store_true",
                        help="Write CSV rows at 1000, 4000 and 8000 shots")


def cmd_analyze(cfg: RunConfig, store: OutputStore) -> int:
    circuit = circuit_for(cfg)
    theta = theta_for(cfg, circuit)
    tol = tolerance_for(cfg)
    if cfg.shots is None:
        report = classify_parameters(circuit, theta, tol, cfg.cap, seed=theta_seed(cfg))
    else:
        report = classify_with_noise(
            circuit,
            theta,
            cfg.shots,
            cfg.seed,
            cfg.z_threshold,
            resamples=cfg.resamples,
            cap=cfg.cap,
            tol=tol,
        )
    store.add_json(cfg.report, report)
    if cfg.sweep:
        rows = eigenvalue_sweep(circuit, theta, cfg.seed, resamples=cfg.resamples)
        store.add_csv(cfg.csv, rows, CSV_COLUMNS)
    elif cfg.csv is not None:
        rows = eigenvalue_table(circuit, theta, cfg.shots, cfg.seed, cfg.resamples)
        store.add_csv(cfg.csv, rows, CSV_COLUMNS)
    logger.info("analyze: %d/%d independent", report.num_independent, circuit.num_parameters)
    return 0
