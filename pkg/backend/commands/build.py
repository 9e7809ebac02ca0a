"""
build: construct the omega = 1 sector circuit for Q qubits and verify it
"""

import argparse
import logging

from errors import NumericalError
from schemas.config import RunConfig
from services.autobuild import build_sector_circuit, verify_sector_circuit
from storage import OutputStore

logger = logging.getLogger(__name__)


def configure(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--qubits", type=int, help="Qubit count Q")
    parser.add_argument("--trials", type=int, help="Random verification points besides theta = 0")
    parser.add_argument("--out", help="Path for the built circuit (default stdout)")


def cmd_build(cfg: RunConfig, store: OutputStore) -> int:
    circuit = build_sector_circuit(cfg.qubits)
    verification = verify_sector_circuit(circuit, cfg.qubits, cfg.trials, cfg.seed)
    store.add_circuit(cfg.out, circuit)
    if cfg.report is not None:
        store.add_json(cfg.report, verification)
    if not verification.passed:
        store.flush()
        failed = [t.label for t in verification.trials if not t.passed]
        raise NumericalError(
            f"Verification failed at {', '.join(failed)}",
            details={"failed": failed},
        )
    return 0
