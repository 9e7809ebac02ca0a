"""
sectors: dimension table of the translational sectors of Q qubits.
With --report the JSON goes to the file and a text table to stdout.
"""

import argparse

from schemas.config import RunConfig
from schemas.reports import SectorEntry, SectorTable
from services.sectors import sector_dimension, sector_specs
from storage import OutputStore


def configure(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--qubits", type=int, help="Qubit count Q")


def sector_table(Q: int) -> SectorTable:
    return SectorTable(
        Q=Q,
        sectors=[SectorEntry(p=s.p, d=s.d, dim=sector_dimension(s)) for s in sector_specs(Q)],
    )


TABLE_COLUMNS = ("Q", "d", "p", "dim")


def cmd_sectors(cfg: RunConfig, store: OutputStore) -> int:
    table = sector_table(cfg.qubits)
    store.add_json(cfg.report, table)
    if cfg.report is not None:
        rows = [{"Q": table.Q, **entry.model_dump()} for entry in table.sectors]
        store.add_table(None, rows, TABLE_COLUMNS)
    return 0
