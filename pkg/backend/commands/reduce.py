"""
reduce: remove an unwanted symmetry and the parameters it makes redundant
"""

import argparse

from commands.common import circuit_for, theta_for, theta_seed, tolerance_for
from errors import SymmetryError
from schemas.config import FreezePolicy, RunConfig
from services.dea import remove_symmetry
from storage import OutputStore


def configure(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--freeze", choices=[p.value for p in FreezePolicy],
                        help="Freeze redundant parameters at their analysis value or at zero")
    parser.add_argument("--phi0", type=float, nargs="+",
                        help="Values of the symmetry parameters in the reduced circuit (default 0)")
    parser.add_argument("--out", help="Path for the reduced circuit (default stdout)")


def cmd_reduce(cfg: RunConfig, store: OutputStore) -> int:
    circuit = circuit_for(cfg)
    if not circuit.symmetry_params:
        raise SymmetryError(f"{cfg.circuit} declares no symmetry_params; nothing to reduce")
    theta = theta_for(cfg, circuit)
    phi0 = cfg.phi0 if cfg.phi0 is not None else [0.0] * len(circuit.symmetry_params)
    reduced, report = remove_symmetry(
        circuit, phi0, theta, tol=tolerance_for(cfg), freeze=cfg.freeze, seed=theta_seed(cfg)
    )
    store.add_circuit(cfg.out, reduced)
    if cfg.report is not None:
        store.add_json(cfg.report, report)
    return 0
