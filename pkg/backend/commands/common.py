"""
Helpers shared by the command modules
"""

import json
from pathlib import Path
from typing import Optional

import numpy as np

from errors import ParameterAssignmentError
from schemas.config import RunConfig
from schemas.reports import TolerancePolicy
from services.circuit_core import ParametricCircuit, load_circuit
from services.simulator import as_assignment, random_assignment

CSV_COLUMNS = (
    "k",
    "lambda_min",
    "lambda_min_std",
    "lambda_second",
    "lambda_second_std",
    "shots",
    "seed",
)


def circuit_for(cfg: RunConfig) -> ParametricCircuit:
    return load_circuit(cfg.circuit)


def tolerance_for(cfg: RunConfig) -> TolerancePolicy:
    return TolerancePolicy(abs_tol=cfg.tol_abs, rel_tol=cfg.tol_rel)


def load_theta(path: Path, circuit: ParametricCircuit) -> np.ndarray:
    """Theta file: a JSON list in roster order or an object keyed by parameter name."""
    path = Path(path)
    if not path.exists():
        raise ParameterAssignmentError(f"Theta file not found: {path}")
    try:
        raw = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise ParameterAssignmentError(f"Theta file is not valid JSON: {exc.msg}") from None
    if not isinstance(raw, (list, dict)):
        raise ParameterAssignmentError("Theta file must hold a list or an object")
    return as_assignment(circuit, raw)


def theta_for(cfg: RunConfig, circuit: ParametricCircuit) -> np.ndarray:
    if cfg.random_theta:
        return random_assignment(circuit.num_parameters, cfg.seed)
    return load_theta(cfg.theta, circuit)


def theta_seed(cfg: RunConfig) -> Optional[int]:
    return cfg.seed if cfg.random_theta else None
